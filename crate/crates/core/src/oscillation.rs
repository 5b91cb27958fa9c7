//! Monotone-piece and crossing counts of iterates, and entropy estimates.
//!
//! For unimodal maps with strictly monotone branches the turning points of
//! `f^k` are exactly the points whose orbit meets the critical point `1/2`
//! within `k-1` steps, so `M(f^k) = 1 + |∪_{j<k} f^{-j}(1/2)|`. The union
//! (rather than a sum over levels) keeps super-stable parameters, where `1/2`
//! is periodic, from being double counted. Tent maps run this tree in exact
//! arithmetic, smooth maps in `f64`, and the remaining PL kinds go through
//! [`PiecewiseLinear::iterate`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::MapFamily;
use crate::numfmt::sig12;
use crate::pl::{PiecewiseLinear, DEFAULT_KNOT_CAP};
use crate::rat::Rat;

/// Two smooth-map preimages closer than this are one point.
pub const DEDUP_TOL: f64 = 1e-10;

/// Default cap on preimage-tree nodes.
pub const DEFAULT_NODE_CAP: usize = 10_000_000;

/// `M(f^1), ..., M(f^K)` with per-k entropy rates `ln M(f^k) / k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthSeries {
    pub counts: Vec<u64>,
    pub rates: Vec<f64>,
}

impl GrowthSeries {
    pub fn from_counts(counts: Vec<u64>) -> GrowthSeries {
        let rates = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (c as f64).ln() / (i + 1) as f64)
            .collect();
        GrowthSeries { counts, rates }
    }

    pub fn max_k(&self) -> usize {
        self.counts.len()
    }

    /// `M(f^k)`, 1-indexed.
    pub fn count(&self, k: usize) -> u64 {
        self.counts[k - 1]
    }

    pub fn rate(&self, k: usize) -> f64 {
        self.rates[k - 1]
    }

    /// The reported entropy estimate (last rate, natural-log units).
    pub fn entropy(&self) -> f64 {
        *self.rates.last().expect("nonempty")
    }

    /// `ln(M_K / M_{K-1})`: free of the `ln c / k` bias of the raw rate.
    pub fn ratio_entropy(&self) -> f64 {
        let k = self.max_k();
        (self.count(k) as f64 / self.count(k - 1) as f64).ln()
    }

    /// Geometric growth factor `(M_{k1} / M_{k0})^{1/(k1-k0)}`.
    pub fn geometric_rate(&self, k0: usize, k1: usize) -> f64 {
        assert!(k0 < k1 && k1 <= self.max_k());
        let ratio = self.count(k1) as f64 / self.count(k0) as f64;
        ratio.powf(1.0 / (k1 - k0) as f64)
    }

    pub fn rates_strictly_decreasing(&self, k0: usize, k1: usize) -> bool {
        (k0..k1).all(|k| self.rate(k + 1) < self.rate(k))
    }

    /// CSV with header `k,count,rate`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(["k", "count", "rate"])?;
        for (i, (c, r)) in self.counts.iter().zip(&self.rates).enumerate() {
            w.write_record([(i + 1).to_string(), c.to_string(), sig12(*r)])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("utf8"))
    }
}

fn check_cap(size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(Error::ResourceCap {
            what: "preimage tree nodes",
            needed: size,
            cap,
        });
    }
    Ok(())
}

/// Sorted set of floats in `[0,1]` with tolerance-based membership.
#[derive(Default)]
struct FloatSet(BTreeSet<u64>);

impl FloatSet {
    /// Inserts unless a point within `DEDUP_TOL` is present.
    fn insert(&mut self, x: f64) -> bool {
        let x = x.clamp(0.0, 1.0);
        let lo = (x - DEDUP_TOL).max(0.0).to_bits();
        let hi = (x + DEDUP_TOL).to_bits();
        if self.0.range(lo..=hi).next().is_some() {
            return false;
        }
        self.0.insert(x.to_bits())
    }

    fn len(&self) -> usize {
        self.0.len()
    }

    fn sorted(&self) -> Vec<f64> {
        self.0.iter().map(|b| f64::from_bits(*b)).collect()
    }
}

/// `M(f^k)` for `k = 1..=k_max`.
pub fn count_monotone_series(m: &MapFamily, k_max: usize) -> Result<Vec<u64>> {
    count_monotone_series_capped(m, k_max, DEFAULT_NODE_CAP)
}

pub fn count_monotone_series_capped(m: &MapFamily, k_max: usize, cap: usize) -> Result<Vec<u64>> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    match m {
        MapFamily::Tent(_) => {
            let mut seen: BTreeSet<Rat> = BTreeSet::new();
            let mut frontier = vec![Rat::half()];
            let mut out = Vec::with_capacity(k_max);
            for _ in 0..k_max {
                let mut next = Vec::new();
                for x in frontier {
                    if seen.insert(x.clone()) {
                        next.extend(m.preimages_exact(&x)?);
                    }
                }
                check_cap(seen.len() + next.len(), cap)?;
                out.push(1 + seen.len() as u64);
                frontier = next;
            }
            Ok(out)
        }
        MapFamily::Logistic(_) | MapFamily::Sine(_) => {
            let mut seen = FloatSet::default();
            let mut frontier = vec![0.5];
            let mut out = Vec::with_capacity(k_max);
            for _ in 0..k_max {
                let mut next = Vec::new();
                for x in frontier {
                    if seen.insert(x) {
                        next.extend(m.preimages_f64(x));
                    }
                }
                check_cap(seen.len() + next.len(), cap)?;
                out.push(1 + seen.len() as u64);
                frontier = next;
            }
            Ok(out)
        }
        MapFamily::FlatTent(_) | MapFamily::Custom(_) => {
            let f = m.to_pl()?;
            let mut g = PiecewiseLinear::identity();
            let mut out = Vec::with_capacity(k_max);
            for _ in 0..k_max {
                let projected = g.num_pieces() * f.num_pieces() + 1;
                if projected > cap.min(DEFAULT_KNOT_CAP) {
                    return Err(Error::ResourceCap {
                        what: "iterate knots",
                        needed: projected,
                        cap: cap.min(DEFAULT_KNOT_CAP),
                    });
                }
                g = PiecewiseLinear::compose(&g, &f);
                out.push(g.monotone_pieces() as u64);
            }
            Ok(out)
        }
    }
}

/// `M(f^k)`: number of maximal monotone pieces of the k-th iterate.
pub fn count_monotone(m: &MapFamily, k: usize) -> Result<u64> {
    Ok(*count_monotone_series(m, k)?.last().expect("k >= 1"))
}

fn level_set_f64(m: &MapFamily, y: f64, k: usize, cap: usize) -> Result<Vec<f64>> {
    let mut level = vec![y];
    for _ in 0..k {
        let mut next = FloatSet::default();
        for &v in &level {
            for x in m.preimages_f64(v) {
                next.insert(x);
            }
        }
        check_cap(next.len(), cap)?;
        level = next.sorted();
    }
    Ok(level)
}

/// Sorted interior turning points of `f^k` for smooth kinds:
/// `∪_{j<k} f^{-j}(1/2)`.
pub fn turning_points_f64(m: &MapFamily, k: usize) -> Result<Vec<f64>> {
    let mut seen = FloatSet::default();
    let mut frontier = vec![0.5];
    for _ in 0..k {
        let mut next = Vec::new();
        for x in frontier {
            if seen.insert(x) {
                next.extend(m.preimages_f64(x));
            }
        }
        check_cap(seen.len() + next.len(), DEFAULT_NODE_CAP)?;
        frontier = next;
    }
    Ok(seen.sorted())
}

/// Crossings of `[a,b]` by `f^k`: exact for PL kinds, preimage-tree level
/// sets with tolerance [`DEDUP_TOL`] for smooth kinds.
pub fn count_crossings_map(m: &MapFamily, k: usize, a: f64, b: f64) -> Result<u64> {
    if !(a < b) || a < 0.0 || b > 1.0 {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= a < b <= 1, got [{a}, {b}]"
        )));
    }
    if m.is_exact() {
        let (ar, br) = (Rat::from_f64(a)?, Rat::from_f64(b)?);
        return count_crossings_exact(m, k, &ar, &br);
    }
    Ok(crossing_points_f64(m, k, a, b)?.len().saturating_sub(1) as u64)
}

pub fn count_crossings_exact(m: &MapFamily, k: usize, a: &Rat, b: &Rat) -> Result<u64> {
    let fk = m.to_pl()?.iterate(k)?;
    Ok(fk.crossings(a, b)? as u64)
}

/// Alternating hits of levels `a` and `b` by `f^k` for smooth maps, in
/// increasing `x`: `(x, hits_b)`.
pub fn crossing_points_f64(m: &MapFamily, k: usize, a: f64, b: f64) -> Result<Vec<(f64, bool)>> {
    let la = level_set_f64(m, a, k, DEFAULT_NODE_CAP)?;
    let lb = level_set_f64(m, b, k, DEFAULT_NODE_CAP)?;
    let mut all: Vec<(f64, bool)> = la
        .into_iter()
        .map(|x| (x, false))
        .chain(lb.into_iter().map(|x| (x, true)))
        .collect();
    all.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut out: Vec<(f64, bool)> = Vec::with_capacity(all.len());
    for e in all {
        if out.last().map(|l| l.1) != Some(e.1) {
            out.push(e);
        }
    }
    Ok(out)
}

/// Counts and entropy rates up to `K`.
pub fn entropy_estimate(m: &MapFamily, k_max: usize) -> Result<GrowthSeries> {
    if k_max < 2 {
        return Err(Error::InvalidArgument(
            "entropy estimate needs K >= 2".into(),
        ));
    }
    Ok(GrowthSeries::from_counts(count_monotone_series(m, k_max)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tent_counts_double() {
        let t = MapFamily::tent(Rat::one()).unwrap();
        assert_eq!(count_monotone(&t, 5).unwrap(), 32);
        assert_eq!(count_crossings_map(&t, 4, 0.0, 1.0).unwrap(), 16);
        assert_eq!(count_crossings_map(&t, 2, 0.25, 0.75).unwrap(), 4);
    }

    #[test]
    fn k1_is_two_for_every_family() {
        for m in [
            MapFamily::tent(Rat::new(1, 3)).unwrap(),
            MapFamily::logistic(0.7).unwrap(),
            MapFamily::sine(0.95).unwrap(),
            MapFamily::flat_tent(Rat::new(9, 10)).unwrap(),
        ] {
            assert_eq!(count_monotone(&m, 1).unwrap(), 2, "{m}");
        }
    }

    #[test]
    fn out_of_range_level_has_no_crossings() {
        let l = MapFamily::logistic(0.6).unwrap();
        assert_eq!(count_crossings_map(&l, 1, 0.2, 0.7).unwrap(), 0);
        let t = MapFamily::tent(Rat::new(3, 5)).unwrap();
        assert_eq!(count_crossings_map(&t, 1, 0.2, 0.7).unwrap(), 0);
        assert!(count_crossings_map(&t, 1, 0.7, 0.2).is_err());
    }

    #[test]
    fn logistic_full_height_doubles() {
        let l = MapFamily::logistic(1.0).unwrap();
        let s = count_monotone_series(&l, 10).unwrap();
        assert_eq!(s, (1..=10).map(|k| 1u64 << k).collect::<Vec<_>>());
        assert_eq!(count_crossings_map(&l, 6, 0.0, 1.0).unwrap(), 64);
    }

    #[test]
    fn series_csv() {
        let t = MapFamily::tent(Rat::one()).unwrap();
        let g = entropy_estimate(&t, 3).unwrap();
        let csv = g.to_csv().unwrap();
        assert!(csv.starts_with("k,count,rate\n1,2,0.693147180560\n"));
        assert!(entropy_estimate(&t, 1).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let t = MapFamily::tent(Rat::one()).unwrap();
        assert!(matches!(
            count_monotone_series_capped(&t, 12, 100),
            Err(Error::ResourceCap { .. })
        ));
    }
}
