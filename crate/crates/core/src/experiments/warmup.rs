//! Cycle-interpolating PL maps `f_123`, `f_1234`, `f_1324` and their
//! monotone-piece growth.

use crate::cycles::Itinerary;
use crate::error::{Error, Result};
use crate::maps::MapFamily;
use crate::oscillation::{count_monotone_series_capped, GrowthSeries};
use crate::pl::PiecewiseLinear;

pub struct WarmupMap {
    pub name: &'static str,
    pub itinerary: Itinerary,
    pub map: MapFamily,
}

/// PL interpolant through `(0,0)`, the cycle `(x_j, f(x_j))` and `(1,0)`.
/// In each case the largest cycle value sits on a cycle point, so no
/// extra apex knot is needed. `f_1324` gets one more knot at `(7/10, 29/100)`:
/// through the cycle alone, `f²` reverses `[1/5, 2/5]` linearly and every
/// point there is periodic.
pub fn warmup_maps() -> Result<Vec<WarmupMap>> {
    let specs: [(&'static str, &[(i64, i64, i64, i64)]); 3] = [
        (
            "f_1234",
            &[(1, 5, 2, 5), (2, 5, 3, 5), (3, 5, 4, 5), (4, 5, 1, 5)],
        ),
        ("f_123", &[(1, 4, 1, 2), (1, 2, 3, 4), (3, 4, 1, 4)]),
        (
            "f_1324",
            &[
                (1, 5, 3, 5),
                (2, 5, 4, 5),
                (3, 5, 2, 5),
                (7, 10, 29, 100),
                (4, 5, 1, 5),
            ],
        ),
    ];
    specs
        .iter()
        .map(|(name, cycle)| {
            let mut knots = vec![(0, 1, 0, 1)];
            knots.extend_from_slice(cycle);
            knots.push((1, 1, 0, 1));
            let f = PiecewiseLinear::from_fracs(&knots)?;
            if !f.is_strictly_unimodal() {
                return Err(Error::Construction(format!(
                    "{name} fails the unimodality audit"
                )));
            }
            let itinerary: Itinerary = name.trim_start_matches("f_").parse()?;
            Ok(WarmupMap {
                name,
                itinerary,
                map: MapFamily::custom(f)?,
            })
        })
        .collect()
}

pub fn warmup_series(k_max: usize, cap: usize) -> Result<Vec<(&'static str, GrowthSeries)>> {
    warmup_maps()?
        .into_iter()
        .map(|w| {
            Ok((
                w.name,
                GrowthSeries::from_counts(count_monotone_series_capped(&w.map, k_max, cap)?),
            ))
        })
        .collect()
}

/// `2 (4k)^{q+1}`, the polynomial budget for a doubling map with `2^q`-cycles.
pub fn doubling_budget(k: usize, q: u32) -> f64 {
    2.0 * (4.0 * k as f64).powi(q as i32 + 1)
}
