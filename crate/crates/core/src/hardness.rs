//! Oscillation certificates and what they imply for any approximant.
//!
//! A certificate is an interval `[a,b]` together with a measured crossing
//! count of `f^k`. If `f^k` crosses `[a,b]` `c` times, the `c + 1`
//! alternating hit points form a sample on which `f^k` thresholded at
//! `(a+b)/2` alternates. A PL function with `m` monotone pieces changes
//! threshold label at most `m` times along that sample. That forces
//! classification error `>= 1/2 - m/N` and, when `m < N - 1`, sup-error
//! `>= (b-a)/2`. Both inequalities are checked exactly against candidates.

use serde::{Deserialize, Serialize};

use crate::cycles::{find_cycles, CycleRecord};
use crate::error::{Error, Result};
use crate::maps::MapFamily;
use crate::oscillation::count_crossings_map;
use crate::pl::{PiecewiseLinear, SampleSet};
use crate::rat::Rat;
use crate::spectra::{rho_inc, rho_odd};

pub const MIN_WIDTH_INCREASING: f64 = 1.0 / 18.0;
pub const MIN_WIDTH_STEFAN: f64 = 0.07;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertMode {
    /// Gap between consecutive points of an increasing cycle.
    Increasing,
    /// Subinterval of the hull of a Stefan cycle.
    Stefan,
    /// A caller-chosen interval with a caller-chosen rate.
    Direct,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Floors {
    pub linf: f64,
    pub cls: f64,
    pub l1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscCertificate {
    pub mode: CertMode,
    pub p: usize,
    pub k: usize,
    pub a: f64,
    pub b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_exact: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_exact: Option<Rat>,
    pub width: f64,
    pub count: u64,
    pub rate: f64,
    /// The count the certificate promises: `ρ^k / 2` or `ρ^{k-p}`.
    pub required: f64,
    pub floors: Floors,
}

impl OscCertificate {
    fn new(
        mode: CertMode,
        p: usize,
        k: usize,
        interval: &Interval,
        count: u64,
        rate: f64,
        required: f64,
    ) -> OscCertificate {
        let width = interval.b - interval.a;
        OscCertificate {
            mode,
            p,
            k,
            a: interval.a,
            b: interval.b,
            a_exact: interval.exact.as_ref().map(|e| e.0.clone()),
            b_exact: interval.exact.as_ref().map(|e| e.1.clone()),
            width,
            count,
            rate,
            required,
            floors: Floors {
                linf: width / 2.0,
                cls: 0.25,
                l1: width * width / 16.0,
            },
        }
    }

    /// Recounts crossings from scratch and rechecks width and count floors.
    pub fn revalidate(&self, m: &MapFamily) -> Result<bool> {
        let interval = Interval {
            a: self.a,
            b: self.b,
            exact: self.a_exact.clone().zip(self.b_exact.clone()),
        };
        let count = interval.crossings(m, self.k)?;
        let min_width = match self.mode {
            CertMode::Increasing => MIN_WIDTH_INCREASING,
            CertMode::Stefan => MIN_WIDTH_STEFAN,
            CertMode::Direct => 0.0,
        };
        Ok(count >= self.count && self.width >= min_width && count as f64 >= self.required)
    }

    /// Midpoint threshold `(a+b)/2`, exact when the endpoints are.
    pub fn threshold(&self) -> Rat {
        match (&self.a_exact, &self.b_exact) {
            (Some(a), Some(b)) => (a + b) / Rat::int(2),
            _ => Rat::from_f64((self.a + self.b) / 2.0).expect("finite"),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[derive(Clone, Debug)]
struct Interval {
    a: f64,
    b: f64,
    exact: Option<(Rat, Rat)>,
}

impl Interval {
    fn crossings(&self, m: &MapFamily, k: usize) -> Result<u64> {
        match &self.exact {
            Some((a, b)) => Ok(m.to_pl()?.iterate(k)?.crossings(a, b)? as u64),
            None => count_crossings_map(m, k, self.a, self.b),
        }
    }
}

fn cycle_points(c: &CycleRecord) -> Vec<Interval> {
    // one degenerate "interval" per point, dynamical order
    match &c.orbit_exact {
        Some(ex) => ex
            .iter()
            .map(|x| Interval {
                a: x.to_f64(),
                b: x.to_f64(),
                exact: Some((x.clone(), x.clone())),
            })
            .collect(),
        None => c
            .orbit
            .iter()
            .map(|&x| Interval {
                a: x,
                b: x,
                exact: None,
            })
            .collect(),
    }
}

fn span(lo: &Interval, hi: &Interval) -> Interval {
    Interval {
        a: lo.a,
        b: hi.a,
        exact: lo
            .exact
            .as_ref()
            .zip(hi.exact.as_ref())
            .map(|(l, h)| (l.0.clone(), h.0.clone())),
    }
}

/// Picks the candidate with the most crossings among those wide enough;
/// errors if none is wide enough or none reaches `required`.
fn best_interval(
    m: &MapFamily,
    k: usize,
    candidates: Vec<Interval>,
    min_width: f64,
    required: f64,
) -> Result<(Interval, u64)> {
    let wide: Vec<Interval> = candidates
        .into_iter()
        .filter(|iv| iv.b - iv.a >= min_width)
        .collect();
    if wide.is_empty() {
        return Err(Error::NoQualifyingGap(format!(
            "no candidate interval of width >= {min_width:.4}"
        )));
    }
    let mut best: Option<(Interval, u64)> = None;
    for iv in wide {
        let c = iv.crossings(m, k)?;
        if best.as_ref().is_none_or(|(_, bc)| c > *bc) {
            best = Some((iv, c));
        }
    }
    let (iv, count) = best.expect("nonempty");
    if (count as f64) < required {
        return Err(Error::CountShortfall {
            measured: count as usize,
            required,
        });
    }
    Ok((iv, count))
}

/// Certificate from an increasing `p`-cycle: a gap `[x_j, x_{j+1}]` of
/// width `>= 1/18` crossed at least `ρ_inc,p^k / 2` times by `f^k`.
pub fn increasing_certificate(m: &MapFamily, c: &CycleRecord, k: usize) -> Result<OscCertificate> {
    if !c.is_increasing() || c.period < 3 {
        return Err(Error::InvalidArgument(format!(
            "need an increasing cycle of period >= 3, got {}",
            c.itinerary
        )));
    }
    let p = c.period;
    let rate = rho_inc(p)?;
    let required = rate.powi(k as i32) / 2.0;
    // orbit starts at the smallest point, so dynamical order is sorted order
    let pts = cycle_points(c);
    let gaps = pts.windows(2).map(|w| span(&w[0], &w[1])).collect();
    let (iv, count) = best_interval(m, k, gaps, MIN_WIDTH_INCREASING, required)?;
    Ok(OscCertificate::new(
        CertMode::Increasing,
        p,
        k,
        &iv,
        count,
        rate,
        required,
    ))
}

/// Finds an increasing `p`-cycle of `m` and certifies it.
pub fn increasing_certificate_for_map(m: &MapFamily, p: usize, k: usize) -> Result<OscCertificate> {
    let cycles = find_cycles(m, p)?;
    let inc: Vec<&CycleRecord> = cycles
        .iter()
        .filter(|c| c.period == p && c.is_increasing())
        .collect();
    if inc.is_empty() {
        return Err(Error::NoQualifyingGap(format!(
            "{m} has no increasing {p}-cycle"
        )));
    }
    let mut last = None;
    for c in inc {
        match increasing_certificate(m, c, k) {
            Ok(cert) => return Ok(cert),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Certificate from a Stefan `p`-cycle: an interval of width `>= 0.07`
/// inside `[x_p, x_{p-1}]` crossed at least `ρ_odd,p^{k-p}` times.
pub fn stefan_certificate(m: &MapFamily, c: &CycleRecord, k: usize) -> Result<OscCertificate> {
    let p = c.period;
    if p < 3 || p % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "Stefan certificates need odd p >= 3, got {p}"
        )));
    }
    if !c.is_stefan() {
        return Err(Error::InvalidArgument(format!(
            "{} is not a Stefan itinerary",
            c.itinerary
        )));
    }
    if k <= p {
        return Err(Error::InvalidArgument(format!(
            "need k > p, got k = {k}, p = {p}"
        )));
    }
    let rate = rho_odd(p)?;
    let required = rate.powi((k - p) as i32);
    // orbit[0] is the smallest point, which is x_p in the Stefan labelling
    let pts = cycle_points(c);
    let x = |j: usize| &pts[j % p];
    let candidates = vec![
        span(x(1), x(2)),
        span(x(2), x(p - 1)),
        span(x(p), x(1)),
        span(x(p), x(p - 1)),
    ];
    let candidates = candidates.into_iter().filter(|iv| iv.a < iv.b).collect();
    let (iv, count) = best_interval(m, k, candidates, MIN_WIDTH_STEFAN, required)?;
    Ok(OscCertificate::new(
        CertMode::Stefan,
        p,
        k,
        &iv,
        count,
        rate,
        required,
    ))
}

/// Certificate for an explicit exact interval, promising `rate^k / 2` crossings.
pub fn direct_certificate(
    m: &MapFamily,
    k: usize,
    a: &Rat,
    b: &Rat,
    rate: f64,
) -> Result<OscCertificate> {
    let iv = Interval {
        a: a.to_f64(),
        b: b.to_f64(),
        exact: Some((a.clone(), b.clone())),
    };
    let required = rate.powi(k as i32) / 2.0;
    let count = iv.crossings(m, k)?;
    if (count as f64) < required {
        return Err(Error::CountShortfall {
            measured: count as usize,
            required,
        });
    }
    Ok(OscCertificate::new(
        CertMode::Direct,
        0,
        k,
        &iv,
        count,
        rate,
        required,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorMode {
    Linf,
    L1,
    OddLinf,
    OddL1,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WidthThreshold {
    pub p: usize,
    pub k: usize,
    pub l: usize,
    pub mode: ErrorMode,
    /// Widths `u <= u_max` are guaranteed to incur constant error.
    pub u_max: f64,
    /// `u_max < 1`: no network width qualifies.
    pub vacuous: bool,
}

pub fn width_threshold(p: usize, k: usize, l: usize, mode: ErrorMode) -> Result<WidthThreshold> {
    if p < 3 || k < 1 || l < 1 || l > k {
        return Err(Error::OutOfRange(format!(
            "need p >= 3 and 1 <= l <= k, got p={p}, k={k}, l={l}"
        )));
    }
    let (rho, exponent, scale) = match mode {
        ErrorMode::Linf => (rho_inc(p)?, k as f64 / l as f64, 0.125),
        ErrorMode::L1 => (rho_inc(p)?, k as f64 / l as f64, 0.0625),
        ErrorMode::OddLinf | ErrorMode::OddL1 => {
            if k < p {
                return Err(Error::OutOfRange(format!(
                    "odd modes need k >= p, got k={k}, p={p}"
                )));
            }
            let scale = if mode == ErrorMode::OddLinf {
                0.125
            } else {
                0.0625
            };
            (rho_odd(p)?, (k - p) as f64 / l as f64, scale)
        }
    };
    let u_max = scale * rho.powf(exponent);
    Ok(WidthThreshold {
        p,
        k,
        l,
        mode,
        u_max,
        vacuous: u_max < 1.0,
    })
}

/// Alternating hit points of `a` and `b` by `f^k`, at most
/// `min(count + 1, ⌊ρ^k⌋ / 2)` of them, with threshold `(a+b)/2`.
pub fn adversarial_sample(fk: &PiecewiseLinear, cert: &OscCertificate) -> Result<SampleSet> {
    if cert.count < 2 {
        return Err(Error::InvalidArgument(format!(
            "certificate count {} < 2",
            cert.count
        )));
    }
    let (a, b) = match (&cert.a_exact, &cert.b_exact) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => {
            return Err(Error::InvalidArgument(
                "adversarial samples need exact endpoints".into(),
            ))
        }
    };
    let events = fk.crossing_events(&a, &b)?;
    let cap = (cert.rate.powi(cert.k as i32).floor() / 2.0).floor() as usize;
    let n = events.len().min(cap).min(cert.count as usize);
    let points = events.into_iter().take(n).map(|(x, _)| x).collect();
    SampleSet::new(points, cert.threshold())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub linf: Rat,
    pub l1: Rat,
    pub cls_error: Rat,
    pub g_pieces: usize,
    pub sample_size: usize,
    /// `1/2 - m/N`: holds for every candidate.
    pub cls_floor: Rat,
    /// True when the candidate has fewer pieces than the certificate's crossings.
    pub threshold_check: bool,
    pub l1_floor_label: f64,
    pub violations: Vec<String>,
}

impl CandidateReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Measures `g` against `f^k` and checks the counting consequences.
pub fn certify_against_candidate(
    fk: &PiecewiseLinear,
    g: &PiecewiseLinear,
    cert: &OscCertificate,
    s: &SampleSet,
) -> Result<CandidateReport> {
    let linf = fk.linf_diff(g);
    let l1 = fk.l1_diff(g);
    let cls_error = fk.classification_error(g, s)?;
    let m = g.monotone_pieces();
    let n = s.len();
    let cls_floor = Rat::half() - Rat::new(m as i64, n as i64);
    let threshold_check = (m as u64) < cert.count;
    let mut violations = Vec::new();
    if cls_error < cls_floor {
        violations.push(format!(
            "cls error {cls_error} below counting floor {cls_floor}"
        ));
    }
    if threshold_check {
        if 4 * m <= n && cls_error < Rat::new(1, 4) {
            violations.push(format!(
                "cls error {cls_error} below 1/4 with m = {m}, N = {n}"
            ));
        }
        let half_width = match (&cert.a_exact, &cert.b_exact) {
            (Some(a), Some(b)) => (b - a) / Rat::int(2),
            _ => Rat::from_f64(cert.width / 2.0).expect("finite"),
        };
        if m + 1 < n && linf < half_width {
            violations.push(format!("sup error {linf} below width/2 = {half_width}"));
        }
    }
    Ok(CandidateReport {
        linf,
        l1,
        cls_error,
        g_pieces: m,
        sample_size: n,
        cls_floor,
        threshold_check,
        l1_floor_label: cert.floors.l1,
        violations,
    })
}

/// Concave, asymmetric unimodal map with the increasing cycle
/// `x_j = 1 - (p-j+1)ε/p`.
pub fn build_need_symmetry(p: usize, eps: &Rat) -> Result<PiecewiseLinear> {
    if p < 3 {
        return Err(Error::OutOfRange(format!("need p >= 3, got {p}")));
    }
    if !eps.is_positive() || (Rat::one() - eps) / eps <= Rat::int(p as i64 - 1) {
        return Err(Error::OutOfRange(format!(
            "ε = {eps} too large: need (1-ε)/ε > {}",
            p - 1
        )));
    }
    let pn = Rat::int(p as i64);
    let x = |j: usize| Rat::one() - Rat::int((p - j + 1) as i64) * eps / &pn;
    let mut knots = vec![(Rat::zero(), Rat::zero())];
    for j in 1..p {
        knots.push((x(j), x(j + 1)));
    }
    knots.push((x(p), x(1)));
    knots.push((Rat::one(), Rat::zero()));
    let f = PiecewiseLinear::new(knots)?;
    audit_construction(&f, p, &(1..=p).map(x).collect::<Vec<_>>())?;
    if !f.is_concave() || f.is_symmetric() {
        return Err(Error::Construction(
            "expected a concave asymmetric map".into(),
        ));
    }
    Ok(f)
}

/// Symmetric, non-concave unimodal map with an increasing cycle packed
/// into `[1/2 - ε/2, 1/2 + ε/2]`.
pub fn build_need_concavity(p: usize, eps: &Rat) -> Result<PiecewiseLinear> {
    if p < 3 {
        return Err(Error::OutOfRange(format!("need p >= 3, got {p}")));
    }
    if !eps.is_positive() || eps >= &Rat::half() {
        return Err(Error::OutOfRange(format!("ε = {eps} not in (0, 1/2)")));
    }
    let half = Rat::half();
    let step = eps / Rat::int(2 * (p as i64 - 1));
    let x = |j: usize| -> Rat {
        if j < p {
            &half - Rat::int((p - 1 - j) as i64) * &step
        } else {
            &half + eps / Rat::int(2)
        }
    };
    let left = vec![
        (Rat::zero(), Rat::zero()),
        (&half - eps / Rat::int(2), x(1)),
        (&half - &step, half.clone()),
    ];
    let mut knots = left.clone();
    knots.push((half.clone(), x(p)));
    for (xx, yy) in left.into_iter().rev() {
        knots.push((Rat::one() - xx, yy));
    }
    let f = PiecewiseLinear::new(knots)?;
    audit_construction(&f, p, &(1..=p).map(x).collect::<Vec<_>>())?;
    if !f.is_symmetric() || f.is_concave() {
        return Err(Error::Construction(
            "expected a symmetric non-concave map".into(),
        ));
    }
    Ok(f)
}

fn audit_construction(f: &PiecewiseLinear, p: usize, cycle: &[Rat]) -> Result<()> {
    if !f.is_strictly_unimodal() {
        return Err(Error::Construction("map is not unimodal".into()));
    }
    for j in 0..p {
        if f.eval(&cycle[j])? != cycle[(j + 1) % p] {
            return Err(Error::Construction(format!("cycle breaks at x_{}", j + 1)));
        }
    }
    if cycle.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Construction("cycle is not increasing".into()));
    }
    Ok(())
}

/// Three-piece approximant of `f^k`: exact on the outer pieces of `f^k`,
/// one chord across everything in between.
pub fn three_piece_approximant(fk: &PiecewiseLinear) -> Result<PiecewiseLinear> {
    let xs = fk.xs();
    let ys = fk.ys();
    let n = xs.len();
    if n <= 4 {
        return Ok(fk.clone());
    }
    PiecewiseLinear::new(vec![
        (xs[0].clone(), ys[0].clone()),
        (xs[1].clone(), ys[1].clone()),
        (xs[n - 2].clone(), ys[n - 2].clone()),
        (xs[n - 1].clone(), ys[n - 1].clone()),
    ])
}

/// Random PL function with `pieces` pieces on a `1/1024` grid.
pub fn random_pl<R: rand::Rng>(rng: &mut R, pieces: usize) -> Result<PiecewiseLinear> {
    if pieces == 0 || pieces > 1023 {
        return Err(Error::OutOfRange(format!(
            "pieces must be in 1..=1023, got {pieces}"
        )));
    }
    let mut xs = std::collections::BTreeSet::new();
    while xs.len() < pieces - 1 {
        xs.insert(rng.gen_range(1..1024i64));
    }
    let mut knots = vec![(Rat::zero(), Rat::new(rng.gen_range(0..=1024), 1024))];
    for x in xs {
        knots.push((Rat::new(x, 1024), Rat::new(rng.gen_range(0..=1024), 1024)));
    }
    knots.push((Rat::one(), Rat::new(rng.gen_range(0..=1024), 1024)));
    PiecewiseLinear::new(knots)
}

/// First `m - 1` pieces of `g`, then one chord to `(1, g(1))`.
pub fn truncate_pieces(g: &PiecewiseLinear, m: usize) -> Result<PiecewiseLinear> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    if g.num_pieces() <= m {
        return Ok(g.clone());
    }
    let mut knots: Vec<(Rat, Rat)> = g.knots().into_iter().take(m).collect();
    let last = g.knots().pop().expect("nonempty");
    knots.push(last);
    PiecewiseLinear::new(knots)
}

/// Least-squares fit of `f` by a PL with `m` equal pieces, on a uniform
/// grid of `samples` points; values are clamped into `[0,1]`.
pub fn least_squares_pl(f: &PiecewiseLinear, m: usize, samples: usize) -> Result<PiecewiseLinear> {
    if m == 0 || samples < m + 1 {
        return Err(Error::InvalidArgument(format!(
            "need m >= 1 and samples > m, got m={m}, samples={samples}"
        )));
    }
    let n = m + 1;
    // tridiagonal normal equations for the hat basis
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n - 1];
    let mut rhs = vec![0.0; n];
    for i in 0..samples {
        let x = i as f64 / (samples - 1) as f64;
        let y = f.eval_f64(x);
        let t = (x * m as f64).min(m as f64 - 1e-12);
        let j = t.floor() as usize;
        let (w1, w0) = (t - j as f64, 1.0 - (t - j as f64));
        diag[j] += w0 * w0;
        diag[j + 1] += w1 * w1;
        off[j] += w0 * w1;
        rhs[j] += w0 * y;
        rhs[j + 1] += w1 * y;
    }
    // Thomas algorithm
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    for i in 0..n {
        let sub = if i > 0 { off[i - 1] } else { 0.0 };
        let denom = diag[i] - if i > 0 { sub * c[i - 1] } else { 0.0 };
        c[i] = if i + 1 < n { off[i] / denom } else { 0.0 };
        d[i] = (rhs[i] - if i > 0 { sub * d[i - 1] } else { 0.0 }) / denom;
    }
    let mut v = vec![0.0; n];
    for i in (0..n).rev() {
        v[i] = d[i] - if i + 1 < n { c[i] * v[i + 1] } else { 0.0 };
    }
    let knots = v
        .iter()
        .enumerate()
        .map(|(i, y)| {
            Ok((
                Rat::new(i as i64, m as i64),
                Rat::from_f64(y.clamp(0.0, 1.0))?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    PiecewiseLinear::new(knots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tent(r: Rat) -> MapFamily {
        MapFamily::tent(r).unwrap()
    }

    #[test]
    fn tent_increasing_certificate() {
        let phi = crate::spectra::GOLDEN_RATIO;
        let m = tent(Rat::dyadic_ceil(phi / 2.0, 40));
        let cert = increasing_certificate_for_map(&m, 3, 8).unwrap();
        assert!(cert.count >= 24);
        assert!(cert.width >= 1.0 / 18.0);
        assert!(cert.revalidate(&m).unwrap());
        let low = tent(Rat::new(51, 100));
        assert!(matches!(
            increasing_certificate_for_map(&low, 3, 8),
            Err(Error::NoQualifyingGap(_))
        ));
    }

    #[test]
    fn threshold_examples() {
        let w = width_threshold(4, 20, 2, ErrorMode::Linf).unwrap();
        assert!((w.u_max - 55.5).abs() < 0.5);
        let w = width_threshold(3, 10, 10, ErrorMode::Linf).unwrap();
        assert!((w.u_max - 0.202).abs() < 1e-3 && w.vacuous);
        let w = width_threshold(5, 12, 1, ErrorMode::OddLinf).unwrap();
        assert!((w.u_max - 1.513f64.powi(7) / 8.0).abs() < 0.05);
        assert!(width_threshold(3, 2, 3, ErrorMode::Linf).is_err());
    }

    #[test]
    fn adversarial_on_full_tent() {
        let m = tent(Rat::one());
        let cert = direct_certificate(&m, 6, &Rat::zero(), &Rat::one(), 2.0).unwrap();
        let f6 = m.to_pl().unwrap().iterate(6).unwrap();
        let s = adversarial_sample(&f6, &cert).unwrap();
        assert_eq!(s.len(), 32);
        assert_eq!(s.threshold(), &Rat::half());
        let zero = PiecewiseLinear::zero();
        assert_eq!(f6.classification_error(&zero, &s).unwrap(), Rat::half());
        assert_eq!(f6.classification_error(&f6, &s).unwrap(), Rat::zero());
        let rep = certify_against_candidate(&f6, &zero, &cert, &s).unwrap();
        assert!(rep.ok() && rep.threshold_check);
        let rep = certify_against_candidate(&f6, &f6, &cert, &s).unwrap();
        assert!(rep.ok() && !rep.threshold_check);
    }

    #[test]
    fn candidate_generators() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let g = random_pl(&mut rng, 12).unwrap();
        assert_eq!(g.num_knots(), 13);
        let t = PiecewiseLinear::tent(&Rat::one()).unwrap();
        let f3 = t.iterate(3).unwrap();
        assert_eq!(truncate_pieces(&f3, 3).unwrap().num_pieces(), 3);
        let ls = least_squares_pl(&t, 2, 1001).unwrap();
        assert!(t.linf_diff(&ls) < Rat::new(1, 100));
    }

    #[test]
    fn need_symmetry_construction() {
        let f = build_need_symmetry(3, &Rat::new(1, 10)).unwrap();
        assert_eq!(f.eval(&Rat::new(9, 10)).unwrap(), Rat::new(14, 15));
        assert!(build_need_symmetry(3, &Rat::half()).is_err());
        let f5 = build_need_symmetry(5, &Rat::new(1, 20)).unwrap();
        let m = MapFamily::custom(f5).unwrap();
        let cs = find_cycles(&m, 5).unwrap();
        assert!(cs
            .iter()
            .any(|c| c.period == 5 && c.itinerary.to_string() == "12345"));
    }

    #[test]
    fn need_concavity_construction() {
        let eps = Rat::new(1, 10);
        let f = build_need_concavity(3, &eps).unwrap();
        assert!(f.is_symmetric() && !f.is_concave());
        let m = MapFamily::custom(f.clone()).unwrap();
        let c = find_cycles(&m, 3)
            .unwrap()
            .into_iter()
            .find(|c| c.period == 3)
            .unwrap();
        let s = c.sorted();
        assert!(s[2] - s[0] < 0.1);
        assert!(matches!(
            increasing_certificate(&m, &c, 6),
            Err(Error::NoQualifyingGap(_))
        ));
    }

    #[test]
    fn three_piece_fits_counterexamples() {
        let eps = Rat::new(1, 10);
        for f in [
            build_need_symmetry(3, &eps).unwrap(),
            build_need_concavity(3, &eps).unwrap(),
        ] {
            for k in 1..=6 {
                let fk = f.iterate(k).unwrap();
                let g = three_piece_approximant(&fk).unwrap();
                assert!(g.num_pieces() <= 3);
                assert!(fk.linf_diff(&g) <= eps, "k = {k}");
            }
        }
    }
}
