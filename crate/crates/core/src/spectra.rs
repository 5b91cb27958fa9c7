//! Characteristic roots `ρ_inc,p`, `ρ_odd,p`, the transition matrix `A_p`
//! and its crossing-count vectors.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numfmt::sig12;

pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolyMode {
    /// `λ^p - 2λ^{p-1} + 1`
    Inc,
    /// `λ^p - 2λ^{p-2} - 1`
    Odd,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharPoly {
    pub mode: PolyMode,
    pub p: usize,
}

impl CharPoly {
    pub fn new(mode: PolyMode, p: usize) -> Result<CharPoly> {
        if p < 3 || (mode == PolyMode::Odd && p % 2 == 0) {
            return Err(Error::OutOfRange(format!(
                "{mode:?} polynomial needs p >= 3 (odd for Odd), got {p}"
            )));
        }
        Ok(CharPoly { mode, p })
    }

    /// Coefficients from `λ^p` down to the constant term.
    pub fn coefficients(&self) -> Vec<i64> {
        let mut c = vec![0i64; self.p + 1];
        c[0] = 1;
        match self.mode {
            PolyMode::Inc => {
                c[1] = -2;
                c[self.p] = 1;
            }
            PolyMode::Odd => {
                c[2] = -2;
                c[self.p] = -1;
            }
        }
        c
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients()
            .iter()
            .fold(0.0, |acc, &c| acc * x + c as f64)
    }

    /// Bracket known to isolate the largest real root.
    pub fn bracket(&self) -> (f64, f64) {
        let p = self.p as f64;
        match self.mode {
            PolyMode::Inc => (fact_lower_bound(self.p), 2.0),
            PolyMode::Odd => (2f64.sqrt(), (2.0 + 2.0 / 2f64.powf(p / 2.0)).sqrt()),
        }
    }

    /// Largest real root by bisection to 1e-12. At `p = 3` the `Inc`
    /// root is exactly the lower bracket end `φ`.
    pub fn largest_root(&self) -> f64 {
        let (lo, hi) = self.bracket();
        if self.mode == PolyMode::Inc && self.p == 3 {
            return GOLDEN_RATIO;
        }
        let (mut lo, mut hi) = (lo, hi);
        let slo = self.eval(lo) < 0.0;
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if (self.eval(mid) < 0.0) == slo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// `max(2 - 4/2^p, φ)`, the lower end of the `ρ_inc,p` bracket.
pub fn fact_lower_bound(p: usize) -> f64 {
    (2.0 - 4.0 / 2f64.powi(p as i32)).max(GOLDEN_RATIO)
}

pub fn rho_inc(p: usize) -> Result<f64> {
    Ok(CharPoly::new(PolyMode::Inc, p)?.largest_root())
}

pub fn rho_odd(p: usize) -> Result<f64> {
    Ok(CharPoly::new(PolyMode::Odd, p)?.largest_root())
}

/// True iff `ρ_inc,p ∈ [max(2 - 4/2^p, φ), 2)`.
pub fn verify_root_bounds(p: usize) -> Result<bool> {
    let r = rho_inc(p)?;
    Ok(r >= fact_lower_bound(p) - 1e-12 && r < 2.0)
}

/// `(A_p)_{ij} = 1` iff `j = p-1` or `i = j+1` (1-indexed), size `(p-1)²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    pub p: usize,
    pub entries: Vec<Vec<u8>>,
}

pub fn transition_matrix(p: usize) -> Result<TransitionMatrix> {
    if p < 3 {
        return Err(Error::OutOfRange(format!("A_p needs p >= 3, got {p}")));
    }
    let n = p - 1;
    let entries = (1..=n)
        .map(|i| (1..=n).map(|j| u8::from(j == n || i == j + 1)).collect())
        .collect();
    Ok(TransitionMatrix { p, entries })
}

impl TransitionMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn mul_f64(&self, v: &[f64]) -> Vec<f64> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, _)| **a == 1)
                    .map(|(_, x)| x)
                    .sum()
            })
            .collect()
    }

    pub fn mul_big(&self, v: &[BigUint]) -> Vec<BigUint> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, _)| **a == 1)
                    .fold(BigUint::default(), |acc, (_, x)| acc + x)
            })
            .collect()
    }
}

/// `y^(k) = A_p^k · 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingVector {
    pub k: usize,
    pub y: Vec<BigUint>,
}

impl CrossingVector {
    pub fn max_entry(&self) -> &BigUint {
        self.y.iter().max().expect("nonempty")
    }

    /// Entries non-decreasing and last at most twice the first.
    pub fn invariants_hold(&self) -> bool {
        self.y.windows(2).all(|w| w[0] <= w[1]) && self.y[self.y.len() - 1] <= &self.y[0] * 2u32
    }
}

pub fn crossing_lb_vector(p: usize, k: usize) -> Result<CrossingVector> {
    let a = transition_matrix(p)?;
    let mut y = vec![BigUint::one(); a.dim()];
    for _ in 0..k {
        y = a.mul_big(&y);
    }
    Ok(CrossingVector { k, y })
}

/// Power iteration from the all-ones vector, stopping when successive
/// eigenvalue estimates agree to relative 1e-12 and the normalized vector
/// moves by at most 1e-12.
pub fn spectral_radius(a: &TransitionMatrix) -> Result<f64> {
    let mut v = vec![1.0; a.dim()];
    let mut lambda = 0.0f64;
    for _ in 0..100_000 {
        let w = a.mul_f64(&v);
        let norm = w.iter().cloned().fold(0.0, f64::max);
        let next = norm / v.iter().cloned().fold(0.0, f64::max);
        let w: Vec<f64> = w.iter().map(|x| x / norm).collect();
        let moved = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        v = w;
        // Early ratios can coincide (both are 2 from the all-ones start for
        // p >= 4), so the direction must settle too.
        if (next - lambda).abs() <= 1e-12 * next && moved <= 1e-12 {
            return Ok(next);
        }
        lambda = next;
    }
    Err(Error::NonConvergence(format!(
        "power iteration on A_{} after 1e5 steps",
        a.p
    )))
}

/// One row of the ρ table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoRow {
    pub p: usize,
    pub rho_inc: f64,
    pub fact_lower_bound: f64,
    pub rho_odd: Option<f64>,
}

pub fn rho_table(ps: std::ops::RangeInclusive<usize>) -> Result<Vec<RhoRow>> {
    ps.map(|p| {
        Ok(RhoRow {
            p,
            rho_inc: rho_inc(p)?,
            fact_lower_bound: fact_lower_bound(p),
            rho_odd: if p % 2 == 1 { Some(rho_odd(p)?) } else { None },
        })
    })
    .collect()
}

/// CSV `p,rho_inc,fact_lower_bound,rho_odd` (`n/a` for even p).
pub fn rho_table_csv(rows: &[RhoRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["p", "rho_inc", "fact_lower_bound", "rho_odd"])?;
    for r in rows {
        w.write_record([
            r.p.to_string(),
            sig12(r.rho_inc),
            sig12(r.fact_lower_bound),
            r.rho_odd.map(sig12).unwrap_or_else(|| "n/a".into()),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_examples() {
        assert!((rho_inc(3).unwrap() - 1.618).abs() < 1e-3);
        assert!((rho_inc(4).unwrap() - 1.839).abs() < 1e-3);
        assert!((rho_odd(7).unwrap() - 1.466).abs() < 1e-3);
        assert!(rho_inc(2).is_err());
        assert!(rho_odd(4).is_err());
    }

    #[test]
    fn fact_bounds() {
        assert!(verify_root_bounds(4).unwrap());
        assert_eq!(fact_lower_bound(4), 1.75);
        assert!((fact_lower_bound(10) - 1.996).abs() < 1e-3);
        assert_eq!(fact_lower_bound(3), GOLDEN_RATIO);
    }

    #[test]
    fn matrices() {
        assert_eq!(
            transition_matrix(3).unwrap().entries,
            vec![vec![0, 1], vec![1, 1]]
        );
        assert_eq!(
            transition_matrix(4).unwrap().entries,
            vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 1]]
        );
        assert!(
            (spectral_radius(&transition_matrix(3).unwrap()).unwrap() - GOLDEN_RATIO).abs() < 1e-9
        );
        let rho4 = spectral_radius(&transition_matrix(4).unwrap()).unwrap();
        assert!((rho4 - 1.839_286_755_214).abs() < 1e-9);
    }

    #[test]
    fn crossing_vectors() {
        let fib: Vec<Vec<u32>> = vec![vec![1, 1], vec![1, 2], vec![2, 3], vec![3, 5]];
        for (k, want) in fib.iter().enumerate() {
            let y = crossing_lb_vector(3, k).unwrap().y;
            assert_eq!(
                y,
                want.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>()
            );
        }
        let y = crossing_lb_vector(4, 1).unwrap().y;
        assert_eq!(
            y,
            vec![
                BigUint::from(1u32),
                BigUint::from(2u32),
                BigUint::from(2u32)
            ]
        );
    }

    #[test]
    fn csv_layout() {
        let csv = rho_table_csv(&rho_table(3..=4).unwrap()).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "p,rho_inc,fact_lower_bound,rho_odd");
        assert!(lines[1].starts_with("3,1.61803398875,"));
        assert!(lines[2].ends_with(",n/a"));
    }
}
