//! Orbit point clouds over a parameter sweep, and cluster counting.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{MapFamily, MapKind};
use crate::rat::Rat;

/// Starting point, kept off `1/2` so super-stable orbits are not hit exactly.
pub const X0: f64 = 0.5001;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BifurcationSpec {
    pub kind: MapKind,
    pub r_lo: f64,
    pub r_hi: f64,
    pub steps: usize,
    pub burn: usize,
    pub keep: usize,
}

impl Default for BifurcationSpec {
    fn default() -> Self {
        BifurcationSpec {
            kind: MapKind::Logistic,
            r_lo: 0.7,
            r_hi: 1.0,
            steps: 1000,
            burn: 500,
            keep: 200,
        }
    }
}

/// `keep` orbit values after `burn` steps from [`X0`]. Tent maps with a
/// small-denominator parameter run exactly: in floating point the slope-2
/// tent shifts out every mantissa bit and collapses onto 0.
pub fn slice(m: &MapFamily, burn: usize, keep: usize) -> Result<Vec<f64>> {
    if let MapFamily::Tent(r) = m {
        if r.denom().bits() <= 8 {
            let mut x: Rat = "0.5001".parse()?;
            let mut out = Vec::with_capacity(keep);
            for i in 0..burn + keep {
                x = m.eval_exact(&x)?;
                if i >= burn {
                    out.push(x.to_f64());
                }
            }
            return Ok(out);
        }
    }
    let mut x = X0;
    for _ in 0..burn {
        x = m.eval_f64(x);
    }
    Ok((0..keep)
        .map(|_| {
            x = m.eval_f64(x);
            x
        })
        .collect())
}

pub fn sweep(spec: &BifurcationSpec) -> Result<Vec<(f64, Vec<f64>)>> {
    if !(0.0 < spec.r_lo && spec.r_lo <= spec.r_hi && spec.r_hi <= 1.0) || spec.steps == 0 {
        return Err(Error::OutOfRange(format!(
            "need 0 < r_lo <= r_hi <= 1 and steps >= 1, got [{}, {}] x {}",
            spec.r_lo, spec.r_hi, spec.steps
        )));
    }
    let rs: Vec<f64> = (0..spec.steps)
        .map(|i| {
            if spec.steps == 1 {
                spec.r_lo
            } else {
                spec.r_lo + (spec.r_hi - spec.r_lo) * i as f64 / (spec.steps - 1) as f64
            }
        })
        .collect();
    rs.into_par_iter()
        .map(|r| {
            let m = MapFamily::from_kind(spec.kind, r)?;
            Ok((r, slice(&m, spec.burn, spec.keep)?))
        })
        .collect()
}

/// Sorted values split wherever consecutive gaps exceed `tol`; cluster sizes.
pub fn clusters(values: &[f64], tol: f64) -> Vec<usize> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mut sizes = Vec::new();
    let mut run = 0;
    for (i, x) in v.iter().enumerate() {
        if i > 0 && x - v[i - 1] > tol {
            sizes.push(run);
            run = 0;
        }
        run += 1;
    }
    if run > 0 {
        sizes.push(run);
    }
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_two_cycle() {
        let m = MapFamily::logistic(0.809).unwrap();
        let v = slice(&m, 500, 200).unwrap();
        assert_eq!(clusters(&v, 1e-3).len(), 2);
    }

    #[test]
    fn full_tent_disperses() {
        let m = MapFamily::tent(Rat::one()).unwrap();
        let v = slice(&m, 500, 200).unwrap();
        let c = clusters(&v, 1e-3);
        assert!(c.iter().all(|&n| n * 10 <= v.len()), "{c:?}");
    }

    #[test]
    fn sweep_shape() {
        let spec = BifurcationSpec {
            steps: 3,
            burn: 10,
            keep: 5,
            ..BifurcationSpec::default()
        };
        let s = sweep(&spec).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[2].0, 1.0);
        assert!(s.iter().all(|(_, v)| v.len() == 5));
    }
}
