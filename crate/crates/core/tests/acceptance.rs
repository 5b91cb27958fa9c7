//! The thirteen acceptance criteria, one PASS/FAIL line each.
//!
//! Two criteria cannot be met as stated and print FAIL. For those the run
//! instead checks the value an independent computation gives, and only an
//! unexpected failure makes the process exit nonzero.

use std::time::{Duration, Instant};

use chaos_itineraries::cycles::{
    classify_regime, find_cycles, superstable_r, Itinerary, Regime, FORCING_TABLE,
};
use chaos_itineraries::experiments::bifurcation::{clusters, slice};
use chaos_itineraries::experiments::warmup::{doubling_budget, warmup_series};
use chaos_itineraries::hardness::{
    adversarial_sample, build_need_concavity, build_need_symmetry, direct_certificate,
    increasing_certificate_for_map, least_squares_pl, random_pl, three_piece_approximant,
    truncate_pieces,
};
use chaos_itineraries::maps::MapKind;
use chaos_itineraries::oscillation::{count_monotone_series, entropy_estimate, GrowthSeries};
use chaos_itineraries::relunet::{eps_approx, net_to_pl, stack, synth_from_pl, ReluNetwork};
use chaos_itineraries::spectra::{
    crossing_lb_vector, fact_lower_bound, rho_inc, rho_odd, spectral_radius, transition_matrix,
};
use chaos_itineraries::vcbounds::{doubling_vc_bound, shatter, vcw_bound, RegexExpr};
use chaos_itineraries::{MapFamily, PiecewiseLinear, Rat};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit_s: u64, what: &str) -> Result<(), String> {
    // Limits are stated for optimized builds; debug builds get ten times more.
    let scale = if cfg!(debug_assertions) { 10 } else { 1 };
    ensure(
        elapsed <= Duration::from_secs(limit_s * scale),
        format!("{what} took {elapsed:?}"),
    )
}

fn rho_table() -> Outcome {
    let t = Instant::now();
    let inc = [1.618, 1.839, 1.928, 1.966, 1.984, 1.992, 1.996, 1.999];
    let fact = [1.618, 1.75, 1.875, 1.938, 1.969, 1.984, 1.992, 1.996];
    for (i, p) in (3..=10).enumerate() {
        let r = rho_inc(p).map_err(|e| e.to_string())?;
        ensure((r - inc[i]).abs() <= 1e-3, format!("rho_inc({p}) = {r}"))?;
        ensure(
            (fact_lower_bound(p) - fact[i]).abs() <= 1e-3,
            format!("fact({p})"),
        )?;
    }
    for (p, want) in [(3, 1.618), (5, 1.513), (7, 1.466), (9, 1.441)] {
        let r = rho_odd(p).map_err(|e| e.to_string())?;
        ensure((r - want).abs() <= 1e-3, format!("rho_odd({p}) = {r}"))?;
    }
    within(t.elapsed(), 1, "table")?;
    Ok("p=3..10 within 0.001".into())
}

fn spectrum() -> Outcome {
    let mut worst = 0f64;
    for p in 3..=10 {
        let a = transition_matrix(p).map_err(|e| e.to_string())?;
        let d = (spectral_radius(&a).map_err(|e| e.to_string())? - rho_inc(p).unwrap()).abs();
        worst = worst.max(d);
    }
    ensure(worst <= 1e-8, format!("max |radius - root| = {worst:e}"))?;
    for p in 3..=8 {
        let rho = rho_inc(p).unwrap();
        for k in 0..=40 {
            let y = crossing_lb_vector(p, k).unwrap();
            ensure(y.invariants_hold(), format!("invariants p={p} k={k}"))?;
            let max = y.max_entry().to_f64().unwrap();
            ensure(
                max >= rho.powi(k as i32) / 2.0,
                format!("max entry p={p} k={k}"),
            )?;
        }
    }
    Ok(format!("max |radius - root| = {worst:.1e}"))
}

fn tent_exactness() -> Outcome {
    let t = Instant::now();
    let tent = PiecewiseLinear::tent(&Rat::one()).unwrap();
    let mut fk = PiecewiseLinear::identity();
    for k in 1..=16 {
        fk = PiecewiseLinear::compose(&fk, &tent);
        ensure(
            fk.monotone_pieces() == 1 << k,
            format!("k={k}: {}", fk.monotone_pieces()),
        )?;
    }
    let h = (fk.monotone_pieces() as f64).ln() / 16.0;
    ensure(
        (h - 2f64.ln()).abs() <= 0.01 * 2f64.ln(),
        format!("entropy {h}"),
    )?;
    within(t.elapsed(), 30, "iteration")?;
    Ok(format!("M = 2^k for k <= 16, rate {h:.6}"))
}

fn tent_corollary() -> Outcome {
    let mut least = f64::INFINITY;
    for p in 3..=5 {
        let rho = rho_inc(p).unwrap();
        let r = Rat::dyadic_ceil(rho / 2.0, 40);
        let m = MapFamily::tent(r).unwrap();
        let mut orbit = vec![0.5];
        for _ in 0..p {
            orbit.push(m.eval_f64(*orbit.last().unwrap()));
        }
        ensure(
            (orbit[p] - 0.5).abs() <= 1e-9,
            format!("p={p}: orbit ends at {}", orbit[p]),
        )?;
        ensure(
            Itinerary::from_orbit(&orbit[..p]).unwrap() == Itinerary::increasing(p),
            format!("p={p}: itinerary"),
        )?;
        for k in 1..=12 {
            let cert = increasing_certificate_for_map(&m, p, k)
                .map_err(|e| format!("p={p} k={k}: {e}"))?;
            ensure(
                cert.width >= 1.0 / 18.0,
                format!("p={p} k={k}: width {}", cert.width),
            )?;
            ensure(
                cert.count as f64 >= rho.powi(k as i32) / 2.0,
                format!("p={p} k={k}: count {}", cert.count),
            )?;
            least = least.min(cert.count as f64 / (rho.powi(k as i32) / 2.0));
        }
    }
    Ok(format!(
        "all certificates hold, min count/required = {least:.3}"
    ))
}

/// Critical-orbit superstable parameter for `1324`, found by plain bisection.
fn superstable_1324_oracle() -> f64 {
    let g = |r: f64| {
        let f = |x: f64| 4.0 * r * x * (1.0 - x);
        f(f(f(f(0.5)))) - 0.5
    };
    let (mut lo, mut hi) = (0.87, 0.88);
    assert!(g(lo).signum() != g(hi).signum());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid).signum() == g(lo).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    let f = |x: f64| 4.0 * r * x * (1.0 - x);
    let orbit = [0.5, f(0.5), f(f(0.5)), f(f(f(0.5)))];
    assert_eq!(Itinerary::from_orbit(&orbit).unwrap().to_string(), "1324");
    r
}

fn superstable_table() -> (Outcome, Option<String>) {
    let t = Instant::now();
    let mut misses = Vec::new();
    for row in FORCING_TABLE {
        match superstable_r(MapKind::Logistic, &row.itinerary(), row.bracket()) {
            Ok(r) if (r - row.r).abs() <= 5e-4 => {}
            Ok(r) => misses.push((row.itinerary, r)),
            Err(e) => return (Err(format!("{}: {e}", row.itinerary)), None),
        }
    }
    let timing = within(t.elapsed(), 10, "table");
    let documented = match misses.as_slice() {
        [("1324", r)] => {
            let oracle = superstable_1324_oracle();
            ((r - oracle).abs() <= 1e-6 && timing.is_ok())
                .then(|| format!("the superstable 1324 orbit sits at r = {oracle:.6}, not 0.8671"))
        }
        _ => None,
    };
    if misses.is_empty() {
        return (timing.map(|_| "12 rows within 5e-4".into()), None);
    }
    let detail = misses
        .iter()
        .map(|(i, r)| format!("{i}: solved {r:.6}"))
        .collect::<Vec<_>>()
        .join(", ");
    (Err(format!("11/12 rows within 5e-4; {detail}")), documented)
}

fn warmup() -> (Outcome, Option<String>) {
    let series = warmup_series(14, 10_000_000).unwrap();
    let s = |i: usize| &series[i].1;
    let (r4, r3, r2) = (
        s(0).geometric_rate(8, 14),
        s(1).geometric_rate(8, 14),
        s(2).geometric_rate(8, 14),
    );
    let mut problems = Vec::new();
    if !(1.74..=1.94).contains(&r4) {
        problems.push(format!("f_1234 rate {r4:.4}"));
    }
    if !(1.55..=1.68).contains(&r3) {
        problems.push(format!("f_123 rate {r3:.4}"));
    }
    if !(1..=14).all(|k| s(2).count(k) as f64 <= doubling_budget(k, 2)) {
        problems.push("f_1324 exceeds 2(4k)^3".into());
    }
    let core_ok = problems.is_empty();
    if r2 > 1.2 {
        problems.push(format!("f_1324 rate {r2:.4} > 1.2"));
    }
    let summary = format!("rates {r4:.4} / {r3:.4} / {r2:.4}");
    if problems.is_empty() {
        return (Ok(summary), None);
    }
    // M(f^k) = k^2 - k + 2 for f_1324 and for the superstable logistic 1324 alike.
    let quadratic: Vec<u64> = (1..=14u64).map(|k| k * k - k + 2).collect();
    let logistic =
        count_monotone_series(&MapFamily::logistic(superstable_1324_oracle()).unwrap(), 14)
            .unwrap();
    let documented =
        (core_ok && problems.len() == 1 && s(2).counts == quadratic && logistic == quadratic).then(
            || {
                "M(f_1324^k) = k^2 - k + 2, whose rate over k in [8,14] is (184/58)^(1/6) = 1.212"
                    .to_string()
            },
        );
    (
        Err(format!("{summary}; {}", problems.join(", "))),
        documented,
    )
}

fn doubling_regime() -> Outcome {
    for (r, q) in [(0.8090, 1u32), (0.8671, 2u32)] {
        let m = MapFamily::logistic(r).unwrap();
        let g = GrowthSeries::from_counts(count_monotone_series(&m, 16).unwrap());
        ensure(
            (1..=14).all(|k| g.count(k) as f64 <= doubling_budget(k, q)),
            format!("r={r}: budget"),
        )?;
        ensure(
            g.rates_strictly_decreasing(8, 16),
            format!("r={r}: rates not decreasing"),
        )?;
        ensure(
            g.rate(16) <= 0.5,
            format!("r={r}: rate(16) = {}", g.rate(16)),
        )?;
        let rep = classify_regime(&find_cycles(&m, 8).unwrap(), 8);
        ensure(
            rep.regime == Regime::Doubling && rep.max_power_of_two == Some(q),
            format!("r={r}: {:?} q={:?}", rep.regime, rep.max_power_of_two),
        )?;
    }
    ensure(doubling_vc_bound(2) == Ok(72), "vc bound p=2")?;
    ensure(doubling_vc_bound(4) == Ok(288), "vc bound p=4")?;
    Ok("q=1 and q=2 bounded, rates decreasing, vc bounds 72 / 288".into())
}

fn chaotic_regime() -> Outcome {
    let tent = MapFamily::tent(Rat::one()).unwrap();
    let maps = [
        tent,
        MapFamily::logistic(0.9580).unwrap(),
        MapFamily::logistic(0.9901).unwrap(),
    ];
    let mut rates = Vec::new();
    for m in &maps {
        let cycles = find_cycles(m, 8).unwrap();
        let rep = classify_regime(&cycles, 8);
        ensure(
            rep.regime == Regime::Chaotic,
            format!("{m}: {:?}", rep.regime),
        )?;
        let h = entropy_estimate(m, 14).unwrap().entropy();
        ensure(h >= 0.3, format!("{m}: entropy {h}"))?;
        rates.push(h);
    }
    let c = find_cycles(&maps[2], 4).unwrap();
    ensure(
        c.iter().any(|c| c.itinerary.to_string() == "1234"),
        "0.9901 lacks 1234",
    )?;
    ensure(c.iter().any(|c| c.period == 3), "0.9901 lacks a 3-cycle")?;
    ensure(
        (rates[0] - 2f64.ln()).abs() <= 0.02 * 2f64.ln(),
        format!("tent entropy {}", rates[0]),
    )?;
    Ok(format!(
        "entropy at k=14: {:.4} / {:.4} / {:.4}",
        rates[0], rates[1], rates[2]
    ))
}

fn counting_lower_bound() -> Outcome {
    let k = 10;
    let tent = MapFamily::tent(Rat::one()).unwrap();
    let fk = tent.to_pl().unwrap().iterate(k).unwrap();
    let cert =
        direct_certificate(&tent, k, &Rat::zero(), &Rat::one(), 2.0).map_err(|e| e.to_string())?;
    let s = adversarial_sample(&fk, &cert).map_err(|e| e.to_string())?;
    ensure(s.len() == 512, format!("sample size {}", s.len()))?;
    let t = s.threshold().clone();
    ensure(t == Rat::half(), "threshold")?;

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let greedy = eps_approx(&fk, &Rat::new(1, 4)).unwrap();
    let mut candidates = Vec::new();
    for m in [2, 4, 8, 16, 32, 64] {
        candidates.push(truncate_pieces(&greedy, m).unwrap());
        candidates.push(least_squares_pl(&fk, m, 4097).unwrap());
    }
    for i in 0..50 {
        candidates.push(random_pl(&mut rng, 1 + i * 63 / 49).unwrap());
    }
    let mut worst_cls = 1.0f64;
    let mut worst_linf = 1.0f64;
    for g in &candidates {
        let m = g.monotone_pieces();
        ensure(m <= 64, format!("candidate with {m} pieces"))?;
        let wrong = s
            .points()
            .iter()
            .filter(|x| (fk.eval(x).unwrap() >= t) != (g.eval(x).unwrap() >= t))
            .count();
        let cls = wrong as f64 / 512.0;
        ensure(
            cls >= 0.5 - m as f64 / 512.0,
            format!("cls {cls} with {m} pieces"),
        )?;
        ensure(cls >= 0.25, format!("cls {cls}"))?;
        let linf = fk.linf_diff(g).to_f64();
        ensure(linf >= 0.25, format!("linf {linf}"))?;
        worst_cls = worst_cls.min(cls);
        worst_linf = worst_linf.min(linf);
    }
    Ok(format!(
        "{} candidates, min cls {worst_cls:.4}, min linf {worst_linf:.4}",
        candidates.len()
    ))
}

fn counterexamples() -> Outcome {
    let eps = Rat::new(1, 10);
    let mut worst = Rat::zero();
    for (name, f) in [
        ("symmetry", build_need_symmetry(3, &eps)),
        ("concavity", build_need_concavity(3, &eps)),
    ] {
        let f = f.map_err(|e| e.to_string())?;
        let shape = if name == "symmetry" {
            f.is_concave() && !f.is_symmetric()
        } else {
            f.is_symmetric() && !f.is_concave()
        };
        ensure(shape, format!("{name}: shape audit"))?;
        let m = MapFamily::custom(f.clone()).unwrap();
        let cycles = find_cycles(&m, 3).unwrap();
        ensure(
            cycles
                .iter()
                .any(|c| c.period == 3 && c.is_increasing() && c.validate(&m)),
            format!("{name}: no increasing 3-cycle"),
        )?;
        let mut fk = PiecewiseLinear::identity();
        for k in 1..=10 {
            fk = PiecewiseLinear::compose(&fk, &f);
            let g = three_piece_approximant(&fk).unwrap();
            ensure(
                g.num_pieces() <= 3,
                format!("{name} k={k}: {} pieces", g.num_pieces()),
            )?;
            let net = synth_from_pl(&g);
            ensure(
                net.width() <= 3 && net.depth() == 2,
                format!("{name} k={k}: net shape"),
            )?;
            let err = fk.linf_diff(&g);
            ensure(err <= eps, format!("{name} k={k}: error {err}"))?;
            worst = Rat::max(&worst, &err);
        }
    }
    Ok(format!("max sup error {worst} over k <= 10"))
}

fn relu_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..100 {
        let f = random_pl(&mut rng, 1 + i % 40).unwrap();
        ensure(
            net_to_pl(&synth_from_pl(&f)).unwrap() == f,
            format!("round trip {i}"),
        )?;
    }
    let tent = PiecewiseLinear::tent(&Rat::one()).unwrap();
    let mut fk = PiecewiseLinear::identity();
    for k in 1..=10 {
        fk = PiecewiseLinear::compose(&fk, &tent);
        let deep = stack(&ReluNetwork::tent_block(), k).unwrap();
        ensure(net_to_pl(&deep).unwrap() == fk, format!("stack k={k}"))?;
        let w = synth_from_pl(&fk).width();
        ensure(w.abs_diff(1 << k) <= 1, format!("width {w} at k={k}"))?;
    }
    Ok("100 round trips, stacks and widths for k <= 10".into())
}

fn vc_calculus() -> Outcome {
    let t = Instant::now();
    let e: RegexExpr = "1*0(01)^∞ ∪ 10^∞"
        .parse()
        .map_err(|e: chaos_itineraries::Error| e.to_string())?;
    let b = vcw_bound(&e);
    ensure(b == 4, format!("worked example bound {b}"))?;
    let tent = MapFamily::tent(Rat::one()).unwrap();
    for d in [2, 3] {
        let w = shatter(&tent, 3, d).map_err(|e| e.to_string())?;
        ensure(
            w.table.len() == 1 << d,
            format!("d={d}: {} labelings", w.table.len()),
        )?;
        ensure(w.verify(&tent).unwrap(), format!("d={d}: verification"))?;
    }
    within(t.elapsed(), 30, "shattering")?;
    Ok("bound 4; d=2 and d=3 shattered".into())
}

fn bifurcation() -> Outcome {
    let mut got = Vec::new();
    for (r, want) in [(0.8090, 2), (0.8671, 4), (0.9580, 3)] {
        let xs = slice(&MapFamily::logistic(r).unwrap(), 500, 200).unwrap();
        let n = clusters(&xs, 1e-3).len();
        ensure(n == want, format!("r={r}: {n} clusters"))?;
        got.push(n);
    }
    Ok(format!("clusters {got:?}"))
}

fn main() {
    let plain: [(&str, fn() -> Outcome); 11] = [
        ("rho table", rho_table),
        ("spectrum agreement", spectrum),
        ("tent exactness", tent_exactness),
        ("tent corollary", tent_corollary),
        ("doubling regime", doubling_regime),
        ("chaotic regime", chaotic_regime),
        ("counting lower bound", counting_lower_bound),
        ("counterexamples", counterexamples),
        ("relu exactness", relu_exactness),
        ("vc calculus", vc_calculus),
        ("bifurcation", bifurcation),
    ];
    let mut results: Vec<(usize, &str, Outcome, Option<String>)> = Vec::new();
    for (i, (name, f)) in plain.iter().enumerate() {
        let n = if i < 4 { i + 1 } else { i + 3 };
        results.push((n, name, f(), None));
        if n == 4 {
            let (o, d) = superstable_table();
            results.push((5, "superstable table", o, d));
            let (o, d) = warmup();
            results.push((6, "warmup phase gap", o, d));
        }
    }
    let mut unexpected = 0;
    for (n, name, outcome, documented) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {n:>2} {name}: {detail}"),
            Err(detail) => {
                let note = match documented {
                    Some(d) => format!(" [known: {d}]"),
                    None => {
                        unexpected += 1;
                        String::new()
                    }
                };
                println!("FAIL criterion {n:>2} {name}: {detail}{note}");
            }
        }
    }
    let passed = results.iter().filter(|r| r.2.is_ok()).count();
    println!(
        "{passed}/{} criteria pass, {unexpected} unexpected failures",
        results.len()
    );
    if unexpected > 0 {
        std::process::exit(1);
    }
}
