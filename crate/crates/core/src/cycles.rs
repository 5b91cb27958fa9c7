//! Periodic orbits, itineraries, Sharkovsky order and super-stable parameters.
//!
//! An itinerary is written as the ranks (1 = smallest) of the cycle points
//! listed in dynamical order, starting from the smallest point. Under this
//! convention `x_1 < x_2 < ... < x_p` climbing in order gives `12...p`, and
//! the period-5 Stefan cycle gives `13425`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::maps::{MapFamily, MapKind};
use crate::pl::{PiecewiseLinear, DEFAULT_KNOT_CAP};
use crate::rat::Rat;

/// Orbits matching under rotation within this distance are one cycle.
pub const ORBIT_TOL: f64 = 1e-8;
/// Bisection stopping width for smooth-map roots.
pub const ROOT_TOL: f64 = 1e-12;
/// Allowed `|f(x_j) - x_{j+1}|` for smooth-map cycles.
pub const MAP_TOL: f64 = 1e-9;

/// Cyclic permutation pattern of a cycle, normalized to start with 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Itinerary(Vec<u32>);

impl Itinerary {
    /// Validates that `ranks` is a permutation of `1..=p` starting at 1 whose
    /// induced map is a single cycle.
    pub fn new(ranks: Vec<u32>) -> Result<Itinerary> {
        let p = ranks.len();
        if p == 0 {
            return Err(Error::InvalidArgument("empty itinerary".into()));
        }
        let mut seen = vec![false; p];
        for &r in &ranks {
            if r == 0 || r as usize > p || std::mem::replace(&mut seen[r as usize - 1], true) {
                return Err(Error::InvalidArgument(format!(
                    "not a permutation: {ranks:?}"
                )));
            }
        }
        if ranks[0] != 1 {
            return Err(Error::InvalidArgument("itinerary must start with 1".into()));
        }
        Ok(Itinerary(ranks))
    }

    /// Itinerary of points given in dynamical order. Errors on duplicates.
    pub fn from_orbit<T: PartialOrd>(orbit: &[T]) -> Result<Itinerary> {
        let p = orbit.len();
        if p == 0 {
            return Err(Error::InvalidArgument("empty orbit".into()));
        }
        let mut idx: Vec<usize> = (0..p).collect();
        idx.sort_by(|&a, &b| {
            orbit[a]
                .partial_cmp(&orbit[b])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        if idx.windows(2).any(|w| orbit[w[0]] >= orbit[w[1]]) {
            return Err(Error::InvalidArgument("orbit has duplicate points".into()));
        }
        let mut rank = vec![0u32; p];
        for (pos, &i) in idx.iter().enumerate() {
            rank[i] = pos as u32 + 1;
        }
        let start = idx[0];
        Ok(Itinerary((0..p).map(|j| rank[(start + j) % p]).collect()))
    }

    pub fn increasing(p: usize) -> Itinerary {
        Itinerary((1..=p as u32).collect())
    }

    /// The Stefan pattern `x_p < x_{p-2} < ... < x_1 < x_2 < ... < x_{p-1}`.
    pub fn stefan(p: usize) -> Result<Itinerary> {
        if p < 3 || p % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "Stefan cycles need odd p >= 3, got {p}"
            )));
        }
        let mut order: Vec<usize> = (1..=p).rev().step_by(2).collect();
        order.extend((2..p).step_by(2));
        let mut rank = vec![0u32; p + 1];
        for (pos, &i) in order.iter().enumerate() {
            rank[i] = pos as u32 + 1;
        }
        let mut seq = vec![rank[p]];
        seq.extend((1..p).map(|i| rank[i]));
        Itinerary::new(seq)
    }

    pub fn period(&self) -> usize {
        self.0.len()
    }

    pub fn ranks(&self) -> &[u32] {
        &self.0
    }

    pub fn is_increasing(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &r)| r as usize == i + 1)
    }

    pub fn is_stefan(&self) -> bool {
        Itinerary::stefan(self.period())
            .map(|s| &s == self)
            .unwrap_or(false)
    }

    /// `child` is a 2-extension of `self`: `a_i = ⌈a'_i/2⌉ = ⌈a'_{i+p}/2⌉`.
    pub fn is_2_extension_of(child: &Itinerary, parent: &Itinerary) -> Result<bool> {
        let p = parent.period();
        if child.period() != 2 * p {
            return Err(Error::InvalidArgument(format!(
                "2-extension needs length {}, got {}",
                2 * p,
                child.period()
            )));
        }
        let c = &child.0;
        Ok((0..p).all(|i| parent.0[i] == c[i].div_ceil(2) && parent.0[i] == c[i + p].div_ceil(2)))
    }

    /// Inverts the ceiling map; `None` when `self` is no 2-extension.
    pub fn parent(&self) -> Option<Itinerary> {
        let n = self.period();
        if n % 2 != 0 {
            return None;
        }
        let p = n / 2;
        let cand: Vec<u32> = self.0[..p].iter().map(|a| a.div_ceil(2)).collect();
        let parent = Itinerary::new(cand).ok()?;
        Itinerary::is_2_extension_of(self, &parent)
            .ok()?
            .then_some(parent)
    }

    /// Power-of-two itineraries are primary iff they reduce to `1` by
    /// repeated 2-extension inversion.
    pub fn is_primary_power_of_two(&self) -> Result<bool> {
        if !self.period().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "period {} is not a power of two",
                self.period()
            )));
        }
        let mut cur = self.clone();
        while cur.period() > 1 {
            match cur.parent() {
                Some(p) => cur = p,
                None => return Ok(false),
            }
        }
        Ok(true)
    }

    /// Primary status: computed for powers of two, looked up in the
    /// forcing table for other periods up to 6, unknown beyond.
    pub fn primary(&self) -> Option<bool> {
        if self.period().is_power_of_two() {
            return self.is_primary_power_of_two().ok();
        }
        if self.period() <= 6 {
            let s = self.to_string();
            return Some(
                FORCING_TABLE
                    .iter()
                    .any(|row| row.itinerary == s && row.tags.contains(&Tag::Primary)),
            );
        }
        None
    }
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() < 10 {
            for r in &self.0 {
                write!(f, "{r}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
            f.write_str(&parts.join("-"))
        }
    }
}

impl fmt::Debug for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Itinerary({self})")
    }
}

impl FromStr for Itinerary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Itinerary> {
        let s = s.trim();
        let ranks: Option<Vec<u32>> = if s.contains('-') {
            s.split('-').map(|t| t.trim().parse::<u32>().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10)).collect()
        };
        Itinerary::new(ranks.ok_or_else(|| Error::Parse(format!("bad itinerary {s:?}")))?)
    }
}

impl Serialize for Itinerary {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Itinerary {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleFlags {
    pub increasing: bool,
    pub stefan: bool,
    /// `None` when unknown (non-power-of-two period above 6).
    pub primary: Option<bool>,
    pub power_of_two: bool,
}

/// A periodic orbit, stored in dynamical order starting from its smallest point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub period: usize,
    pub orbit: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_exact: Option<Vec<Rat>>,
    pub itinerary: Itinerary,
    pub flags: CycleFlags,
    pub residual: f64,
}

impl CycleRecord {
    fn build(orbit: Vec<f64>, orbit_exact: Option<Vec<Rat>>, residual: f64) -> Result<CycleRecord> {
        let itinerary = match &orbit_exact {
            Some(ex) => Itinerary::from_orbit(ex)?,
            None => Itinerary::from_orbit(&orbit)?,
        };
        let p = orbit.len();
        let start = match &orbit_exact {
            Some(ex) => (0..p).min_by(|&a, &b| ex[a].cmp(&ex[b])).expect("nonempty"),
            None => (0..p)
                .min_by(|&a, &b| orbit[a].total_cmp(&orbit[b]))
                .expect("nonempty"),
        };
        let orbit: Vec<f64> = (0..p).map(|j| orbit[(start + j) % p]).collect();
        let orbit_exact =
            orbit_exact.map(|ex| (0..p).map(|j| ex[(start + j) % p].clone()).collect());
        let flags = CycleFlags {
            increasing: itinerary.is_increasing(),
            stefan: itinerary.is_stefan(),
            primary: itinerary.primary(),
            power_of_two: p.is_power_of_two(),
        };
        Ok(CycleRecord {
            period: p,
            orbit,
            orbit_exact,
            itinerary,
            flags,
            residual,
        })
    }

    /// Exact cycle of a PL-representable map from one of its points.
    pub fn from_exact_point(m: &MapFamily, x: &Rat, p: usize) -> Result<CycleRecord> {
        let mut pts = vec![x.clone()];
        for _ in 1..p {
            let nx = m.eval_exact(pts.last().expect("nonempty"))?;
            pts.push(nx);
        }
        if &m.eval_exact(&pts[p - 1])? != x {
            return Err(Error::InvalidArgument(format!(
                "{x} is not a {p}-periodic point"
            )));
        }
        let orbit = pts.iter().map(Rat::to_f64).collect();
        CycleRecord::build(orbit, Some(pts), 0.0)
    }

    /// Cycle from floating points in dynamical order; checks the mapping
    /// tolerance.
    pub fn from_float_orbit(m: &MapFamily, orbit: Vec<f64>) -> Result<CycleRecord> {
        let p = orbit.len();
        let residual = (0..p)
            .map(|j| (m.eval_f64(orbit[j]) - orbit[(j + 1) % p]).abs())
            .fold(0.0, f64::max);
        if residual > MAP_TOL {
            return Err(Error::InvalidArgument(format!(
                "orbit residual {residual:e} exceeds tolerance"
            )));
        }
        CycleRecord::build(orbit, None, residual)
    }

    pub fn is_increasing(&self) -> bool {
        self.flags.increasing
    }

    pub fn is_stefan(&self) -> bool {
        self.flags.stefan
    }

    /// Points in ascending order.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.orbit.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn sorted_exact(&self) -> Option<Vec<Rat>> {
        self.orbit_exact.as_ref().map(|o| {
            let mut v = o.clone();
            v.sort();
            v
        })
    }

    /// Re-checks the mapping invariant against `m`.
    pub fn validate(&self, m: &MapFamily) -> bool {
        let p = self.period;
        if let Some(ex) = &self.orbit_exact {
            return (0..p).all(|j| m.eval_exact(&ex[j]).ok().as_ref() == Some(&ex[(j + 1) % p]));
        }
        (0..p).all(|j| (m.eval_f64(self.orbit[j]) - self.orbit[(j + 1) % p]).abs() <= MAP_TOL)
    }
}

/// Recomputes the normalized itinerary of a cycle from its orbit.
pub fn itinerary_of(c: &CycleRecord) -> Result<Itinerary> {
    match &c.orbit_exact {
        Some(ex) => Itinerary::from_orbit(ex),
        None => Itinerary::from_orbit(&c.orbit),
    }
}

fn divisors_below(p: usize) -> impl Iterator<Item = usize> {
    (1..p).filter(move |d| p % d == 0)
}

/// All cycles of period `<= p_max`, ordered by period then leftmost point.
pub fn find_cycles(m: &MapFamily, p_max: usize) -> Result<Vec<CycleRecord>> {
    if p_max == 0 {
        return Err(Error::InvalidArgument("p_max must be at least 1".into()));
    }
    let mut out = if m.is_exact() {
        find_cycles_exact(m, p_max)?
    } else {
        let per: Vec<Result<Vec<CycleRecord>>> = (1..=p_max)
            .into_par_iter()
            .map(|p| cycles_of_period_f64(m, p))
            .collect();
        let mut v = Vec::new();
        for r in per {
            v.extend(r?);
        }
        v
    };
    out.sort_by(|a, b| {
        a.period
            .cmp(&b.period)
            .then(a.orbit[0].total_cmp(&b.orbit[0]))
    });
    Ok(out)
}

pub(crate) fn fixed_points_of(g: &PiecewiseLinear) -> Result<Vec<Rat>> {
    let xs = g.xs();
    let ys = g.ys();
    let mut roots: Vec<Rat> = Vec::new();
    for i in 0..xs.len() {
        let h1 = &ys[i] - &xs[i];
        if h1.is_zero() {
            if i > 0 && (&ys[i - 1] - &xs[i - 1]).is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "a continuum of periodic points on [{}, {}]",
                    xs[i - 1],
                    xs[i]
                )));
            }
            roots.push(xs[i].clone());
        } else if i > 0 {
            let h0 = &ys[i - 1] - &xs[i - 1];
            if h0.signum() * h1.signum() < 0 {
                let (x0, x1) = (&xs[i - 1], &xs[i]);
                roots.push(x0 - &h0 * (x1 - x0) / (&h1 - &h0));
            }
        }
    }
    Ok(roots)
}

fn find_cycles_exact(m: &MapFamily, p_max: usize) -> Result<Vec<CycleRecord>> {
    let f = m.to_pl()?;
    let mut g = PiecewiseLinear::identity();
    let mut out = Vec::new();
    for p in 1..=p_max {
        let projected = g.num_pieces() * f.num_pieces() + 1;
        if projected > DEFAULT_KNOT_CAP {
            return Err(Error::ResourceCap {
                what: "iterate knots",
                needed: projected,
                cap: DEFAULT_KNOT_CAP,
            });
        }
        g = PiecewiseLinear::compose(&g, &f);
        let roots = fixed_points_of(&g)?;
        let mut taken: std::collections::BTreeSet<Rat> = std::collections::BTreeSet::new();
        for x in roots {
            if taken.contains(&x) {
                continue;
            }
            let mut orbit = vec![x.clone()];
            for _ in 1..p {
                let nx = f.eval(orbit.last().expect("nonempty"))?;
                orbit.push(nx);
            }
            let minimal = divisors_below(p).all(|d| orbit[d] != x);
            for y in &orbit {
                taken.insert(y.clone());
            }
            if minimal {
                out.push(CycleRecord::from_exact_point(m, &x, p)?);
            }
        }
    }
    Ok(out)
}

fn iterate_f64(m: &MapFamily, x: f64, p: usize) -> f64 {
    (0..p).fold(x, |y, _| m.eval_f64(y))
}

/// Grid denser near the endpoints, uniform in the angle of `x = (1 - cos θ)/2`.
fn root_grid(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| (1.0 - (std::f64::consts::PI * i as f64 / n as f64).cos()) / 2.0)
        .map(|x: f64| x.clamp(0.0, 1.0))
        .collect()
}

fn bisect<F: Fn(f64) -> f64>(h: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut hlo = h(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let hm = h(mid);
        if hm == 0.0 {
            return mid;
        }
        if (hm < 0.0) == (hlo < 0.0) {
            lo = mid;
            hlo = hm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn cycles_of_period_f64(m: &MapFamily, p: usize) -> Result<Vec<CycleRecord>> {
    let h = |x: f64| iterate_f64(m, x, p) - x;
    let grid = root_grid(4096 * p);
    let vals: Vec<f64> = grid.iter().map(|&x| h(x)).collect();
    let mut roots = Vec::new();
    for i in 0..grid.len() {
        if vals[i] == 0.0 {
            roots.push(grid[i]);
        } else if i + 1 < grid.len() && vals[i + 1] != 0.0 && (vals[i] < 0.0) != (vals[i + 1] < 0.0)
        {
            roots.push(bisect(h, grid[i], grid[i + 1], ROOT_TOL));
        }
    }
    let roots: Vec<f64> = roots
        .into_iter()
        .filter(|&x| divisors_below(p).all(|d| (iterate_f64(m, x, d) - x).abs() > ORBIT_TOL))
        .collect();
    let mut used = vec![false; roots.len()];
    let mut out = Vec::new();
    let nearest = |y: f64| -> Option<usize> {
        let i = roots.partition_point(|&r| r < y);
        [i.checked_sub(1), Some(i)]
            .into_iter()
            .flatten()
            .filter(|&j| j < roots.len())
            .min_by(|&a, &b| (roots[a] - y).abs().total_cmp(&(roots[b] - y).abs()))
            .filter(|&j| (roots[j] - y).abs() < 1e-6)
    };
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut orbit = vec![roots[i]];
        let mut complete = true;
        for _ in 1..p {
            let y = m.eval_f64(*orbit.last().expect("nonempty"));
            match nearest(y) {
                Some(j) => {
                    used[j] = true;
                    orbit.push(roots[j]);
                }
                None => {
                    complete = false;
                    orbit.push(y);
                }
            }
        }
        if !complete {
            return Err(Error::RootSearch(format!(
                "period-{p} orbit from {:.12} left the root set; grid may have missed roots",
                roots[i]
            )));
        }
        let mut sorted = orbit.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[1] - w[0] < ORBIT_TOL) {
            continue;
        }
        let residual = (0..p)
            .map(|j| (m.eval_f64(orbit[j]) - orbit[(j + 1) % p]).abs())
            .fold(0.0, f64::max);
        if residual > MAP_TOL {
            return Err(Error::RootSearch(format!(
                "period-{p} orbit residual {residual:e}"
            )));
        }
        out.push(CycleRecord::build(orbit, None, residual)?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Doubling,
    Chaotic,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Doubling => "Doubling",
            Regime::Chaotic => "Chaotic",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regime: Regime,
    pub witness: Itinerary,
    /// `q` with maximal period `2^q`, in the doubling regime.
    pub max_power_of_two: Option<u32>,
    /// Largest period searched; nothing is claimed beyond it.
    pub p_max: usize,
}

/// Chaotic iff some detected cycle has a non-power-of-two period or a
/// non-primary power-of-two itinerary.
pub fn classify_regime(cycles: &[CycleRecord], p_max: usize) -> RegimeReport {
    let chaotic = cycles
        .iter()
        .filter(|c| !c.flags.power_of_two || c.flags.primary == Some(false))
        .min_by_key(|c| (c.flags.power_of_two, c.period));
    if let Some(c) = chaotic {
        return RegimeReport {
            regime: Regime::Chaotic,
            witness: c.itinerary.clone(),
            max_power_of_two: None,
            p_max,
        };
    }
    match cycles.iter().max_by_key(|c| c.period) {
        Some(c) => RegimeReport {
            regime: Regime::Doubling,
            witness: c.itinerary.clone(),
            max_power_of_two: Some(c.period.trailing_zeros()),
            p_max,
        },
        None => RegimeReport {
            regime: Regime::Doubling,
            witness: Itinerary::increasing(1),
            max_power_of_two: Some(0),
            p_max,
        },
    }
}

fn split_two_adic(n: usize) -> (u32, usize) {
    let a = n.trailing_zeros();
    (a, n >> a)
}

/// `p ▷ q` in Sharkovsky's order: `3 ▷ 5 ▷ 7 ▷ ... ▷ 2·3 ▷ 2·5 ▷ ... ▷ 4 ▷ 2 ▷ 1`.
pub fn sharkovsky_precedes(p: usize, q: usize) -> bool {
    assert!(p >= 1 && q >= 1, "periods start at 1");
    let (a, m) = split_two_adic(p);
    let (b, n) = split_two_adic(q);
    match (m > 1, n > 1) {
        (true, true) => (a, m) < (b, n),
        (true, false) => true,
        (false, true) => false,
        (false, false) => a > b,
    }
}

/// Sufficient test for an increasing `p`-cycle:
/// `f(1/2) > 1/2` and `f^2(1/2) < ... < f^p(1/2) <= 1/2`.
pub fn increasing_cycle_certificate(m: &MapFamily, p: usize) -> bool {
    if p < 2 {
        return false;
    }
    if m.is_exact() {
        let orbit = match m.critical_orbit(p) {
            Ok(o) => o.exact.expect("exact kind"),
            Err(_) => return false,
        };
        let half = Rat::half();
        orbit[0] > half && orbit[1..].windows(2).all(|w| w[0] < w[1]) && orbit[p - 1] <= half
    } else {
        let orbit = match m.critical_orbit(p) {
            Ok(o) => o.values,
            Err(_) => return false,
        };
        orbit[0] > 0.5 && orbit[1..].windows(2).all(|w| w[0] < w[1]) && orbit[p - 1] <= 0.5
    }
}

/// Parameter in `bracket` at which `1/2` lies on a cycle with itinerary
/// `itin`. Scans for sign changes of `f_r^p(1/2) - 1/2`, bisects each, and
/// keeps the one whose critical orbit matches, nearest the bracket centre.
pub fn superstable_r(kind: MapKind, itin: &Itinerary, bracket: (f64, f64)) -> Result<f64> {
    let (lo, hi) = bracket;
    if !(lo < hi) || lo <= 0.0 || hi > 1.0 {
        return Err(Error::InvalidArgument(format!("bad bracket [{lo}, {hi}]")));
    }
    if matches!(kind, MapKind::CustomPl) {
        return Err(Error::InvalidArgument(
            "custom maps have no parameter".into(),
        ));
    }
    let p = itin.period();
    let g = |r: f64| -> f64 {
        let m = MapFamily::from_kind(kind, r).expect("r in (0,1]");
        iterate_f64(&m, 0.5, p) - 0.5
    };
    const STEPS: usize = 4000;
    let rs: Vec<f64> = (0..=STEPS)
        .map(|i| lo + (hi - lo) * i as f64 / STEPS as f64)
        .collect();
    let gs: Vec<f64> = rs.iter().map(|&r| g(r)).collect();
    let mut candidates = Vec::new();
    for i in 0..STEPS {
        if gs[i] == 0.0 {
            candidates.push(rs[i]);
        } else if gs[i + 1] != 0.0 && (gs[i] < 0.0) != (gs[i + 1] < 0.0) {
            candidates.push(bisect(g, rs[i], rs[i + 1], 1e-15));
        }
    }
    if gs[STEPS] == 0.0 {
        candidates.push(rs[STEPS]);
    }
    if candidates.is_empty() {
        return Err(Error::NoSignChange(format!(
            "f_r^{p}(1/2) - 1/2 on [{lo}, {hi}]"
        )));
    }
    let centre = 0.5 * (lo + hi);
    let mut found: Vec<(f64, Itinerary)> = Vec::new();
    for r in candidates {
        let m = MapFamily::from_kind(kind, r)?;
        let mut orbit = vec![0.5];
        for _ in 1..p {
            orbit.push(m.eval_f64(*orbit.last().expect("nonempty")));
        }
        let mut sorted = orbit.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[1] - w[0] < 1e-9) {
            continue;
        }
        if let Ok(it) = Itinerary::from_orbit(&orbit) {
            found.push((r, it));
        }
    }
    let best = found
        .iter()
        .filter(|(_, it)| it == itin)
        .min_by(|a, b| (a.0 - centre).abs().total_cmp(&(b.0 - centre).abs()));
    match best {
        Some((r, _)) => Ok(*r),
        None => Err(Error::ItineraryMismatch {
            expected: itin.to_string(),
            found: found
                .iter()
                .map(|(_, it)| it.to_string())
                .collect::<Vec<_>>()
                .join(","),
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tag {
    Stefan,
    Increasing,
    Primary,
}

/// One row of the super-stable forcing table for the logistic family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ForcingRow {
    pub p: usize,
    pub itinerary: &'static str,
    pub regime: Regime,
    pub r: f64,
    pub tags: &'static [Tag],
}

/// Super-stable cycles of length at most 6 for `4rx(1-x)`, in order of appearance.
pub const FORCING_TABLE: [ForcingRow; 12] = [
    ForcingRow {
        p: 2,
        itinerary: "12",
        regime: Regime::Doubling,
        r: 0.8090,
        tags: &[Tag::Primary],
    },
    ForcingRow {
        p: 4,
        itinerary: "1324",
        regime: Regime::Doubling,
        r: 0.8671,
        tags: &[Tag::Primary],
    },
    ForcingRow {
        p: 6,
        itinerary: "143526",
        regime: Regime::Chaotic,
        r: 0.9069,
        tags: &[Tag::Primary],
    },
    ForcingRow {
        p: 5,
        itinerary: "13425",
        regime: Regime::Chaotic,
        r: 0.9347,
        tags: &[Tag::Stefan, Tag::Primary],
    },
    ForcingRow {
        p: 3,
        itinerary: "123",
        regime: Regime::Chaotic,
        r: 0.9580,
        tags: &[Tag::Stefan, Tag::Increasing, Tag::Primary],
    },
    ForcingRow {
        p: 6,
        itinerary: "135246",
        regime: Regime::Chaotic,
        r: 0.9611,
        tags: &[],
    },
    ForcingRow {
        p: 5,
        itinerary: "12435",
        regime: Regime::Chaotic,
        r: 0.9764,
        tags: &[],
    },
    ForcingRow {
        p: 6,
        itinerary: "124536",
        regime: Regime::Chaotic,
        r: 0.9844,
        tags: &[],
    },
    ForcingRow {
        p: 4,
        itinerary: "1234",
        regime: Regime::Chaotic,
        r: 0.9901,
        tags: &[Tag::Increasing],
    },
    ForcingRow {
        p: 6,
        itinerary: "123546",
        regime: Regime::Chaotic,
        r: 0.9944,
        tags: &[],
    },
    ForcingRow {
        p: 5,
        itinerary: "12345",
        regime: Regime::Chaotic,
        r: 0.9976,
        tags: &[Tag::Increasing],
    },
    ForcingRow {
        p: 6,
        itinerary: "123456",
        regime: Regime::Chaotic,
        r: 0.9994,
        tags: &[Tag::Increasing],
    },
];

impl ForcingRow {
    pub fn itinerary(&self) -> Itinerary {
        self.itinerary.parse().expect("table itineraries are valid")
    }

    /// Seed bracket `r ± 0.01`, clipped to `(0,1]`.
    pub fn bracket(&self) -> (f64, f64) {
        (self.r - 0.01, (self.r + 0.01).min(1.0))
    }
}
