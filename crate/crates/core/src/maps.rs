//! Parametric unimodal maps and their preimage oracles.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pl::PiecewiseLinear;
use crate::rat::Rat;

/// Smooth-map preimages of values this close to the maximum collapse onto the apex.
pub const APEX_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Tent,
    Logistic,
    Sine,
    #[serde(rename = "flat-tent", alias = "flattent")]
    FlatTent,
    #[serde(rename = "custom", alias = "custompl")]
    CustomPl,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::Tent => "tent",
            MapKind::Logistic => "logistic",
            MapKind::Sine => "sine",
            MapKind::FlatTent => "flat-tent",
            MapKind::CustomPl => "custom",
        })
    }
}

impl FromStr for MapKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<MapKind> {
        match s.to_ascii_lowercase().as_str() {
            "tent" => Ok(MapKind::Tent),
            "logistic" | "log" => Ok(MapKind::Logistic),
            "sine" | "sin" => Ok(MapKind::Sine),
            "flat-tent" | "flattent" | "flat" => Ok(MapKind::FlatTent),
            "custom" | "custompl" | "pl" => Ok(MapKind::CustomPl),
            _ => Err(Error::Parse(format!("unknown map kind {s:?}"))),
        }
    }
}

/// A unimodal map `[0,1] -> [0,1]`.
///
/// Tent: `2r min(x, 1-x)`. Logistic: `4rx(1-x)`. Sine: `r sin(pi x)`.
/// FlatTent: `min(5rx/2, r, 5r(1-x)/2)`. Custom: any weakly unimodal PL map.
#[derive(Clone, Debug, PartialEq)]
pub enum MapFamily {
    Tent(Rat),
    Logistic(f64),
    Sine(f64),
    FlatTent(Rat),
    Custom(PiecewiseLinear),
}

/// Outcome of the unimodality audit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unimodality {
    Strict,
    /// Unimodal with a plateau at the top (no unique maximizer).
    Weak,
}

fn check_rat_param(r: &Rat) -> Result<()> {
    if !r.is_positive() || r > &Rat::one() {
        return Err(Error::OutOfRange(format!("parameter r = {r} not in (0,1]")));
    }
    Ok(())
}

fn check_float_param(r: f64) -> Result<()> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::OutOfRange(format!("parameter r = {r} not in (0,1]")));
    }
    Ok(())
}

impl MapFamily {
    pub fn tent(r: Rat) -> Result<MapFamily> {
        check_rat_param(&r)?;
        Ok(MapFamily::Tent(r))
    }

    pub fn logistic(r: f64) -> Result<MapFamily> {
        check_float_param(r)?;
        Ok(MapFamily::Logistic(r))
    }

    pub fn sine(r: f64) -> Result<MapFamily> {
        check_float_param(r)?;
        Ok(MapFamily::Sine(r))
    }

    pub fn flat_tent(r: Rat) -> Result<MapFamily> {
        check_rat_param(&r)?;
        Ok(MapFamily::FlatTent(r))
    }

    /// Custom PL map; must be zero at both ends and positive, rising then
    /// falling in between.
    pub fn custom(f: PiecewiseLinear) -> Result<MapFamily> {
        if !f.is_weakly_unimodal() {
            return Err(Error::InvalidArgument("custom map is not unimodal".into()));
        }
        Ok(MapFamily::Custom(f))
    }

    /// Build a family member from a kind and a parameter given as `f64`.
    /// Exact kinds convert the float exactly.
    pub fn from_kind(kind: MapKind, r: f64) -> Result<MapFamily> {
        match kind {
            MapKind::Tent => MapFamily::tent(Rat::from_f64(r)?),
            MapKind::FlatTent => MapFamily::flat_tent(Rat::from_f64(r)?),
            MapKind::Logistic => MapFamily::logistic(r),
            MapKind::Sine => MapFamily::sine(r),
            MapKind::CustomPl => Err(Error::InvalidArgument("custom maps need knots".into())),
        }
    }

    pub fn kind(&self) -> MapKind {
        match self {
            MapFamily::Tent(_) => MapKind::Tent,
            MapFamily::Logistic(_) => MapKind::Logistic,
            MapFamily::Sine(_) => MapKind::Sine,
            MapFamily::FlatTent(_) => MapKind::FlatTent,
            MapFamily::Custom(_) => MapKind::CustomPl,
        }
    }

    /// Parameter as a float; for custom maps, the maximum value.
    pub fn r_f64(&self) -> f64 {
        match self {
            MapFamily::Tent(r) | MapFamily::FlatTent(r) => r.to_f64(),
            MapFamily::Logistic(r) | MapFamily::Sine(r) => *r,
            MapFamily::Custom(f) => f.max_value().to_f64(),
        }
    }

    /// True for the kinds evaluated in exact rational arithmetic.
    pub fn is_exact(&self) -> bool {
        matches!(
            self,
            MapFamily::Tent(_) | MapFamily::FlatTent(_) | MapFamily::Custom(_)
        )
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            MapFamily::Custom(f) => f.is_symmetric(),
            _ => true,
        }
    }

    pub fn is_concave(&self) -> bool {
        match self {
            MapFamily::Custom(f) => f.is_concave(),
            _ => true,
        }
    }

    pub fn eval_exact(&self, x: &Rat) -> Result<Rat> {
        if !x.in_unit_interval() {
            return Err(Error::OutOfRange(format!("x = {x} outside [0,1]")));
        }
        match self {
            MapFamily::Tent(r) => {
                let m = Rat::min(x, &(Rat::one() - x));
                Ok(Rat::int(2) * r * m)
            }
            MapFamily::FlatTent(r) => {
                let k = Rat::new(5, 2) * r;
                let left = &k * x;
                let right = &k * (Rat::one() - x);
                Ok(Rat::min(&Rat::min(&left, r), &right))
            }
            MapFamily::Custom(f) => f.eval(x),
            _ => Err(Error::NotPiecewiseLinear(format!(
                "{} has no exact evaluation",
                self.kind()
            ))),
        }
    }

    /// Floating-point evaluation; defined for every kind.
    pub fn eval_f64(&self, x: f64) -> f64 {
        match self {
            MapFamily::Logistic(r) => 4.0 * r * x * (1.0 - x),
            MapFamily::Sine(r) => r * (PI * x).sin(),
            MapFamily::Tent(r) => 2.0 * r.to_f64() * x.min(1.0 - x),
            MapFamily::FlatTent(r) => {
                let r = r.to_f64();
                (2.5 * r * x).min(r).min(2.5 * r * (1.0 - x))
            }
            MapFamily::Custom(f) => f.eval_f64(x),
        }
    }

    pub fn to_pl(&self) -> Result<PiecewiseLinear> {
        match self {
            MapFamily::Tent(r) => PiecewiseLinear::tent(r),
            MapFamily::FlatTent(r) => PiecewiseLinear::new(vec![
                (Rat::zero(), Rat::zero()),
                (Rat::new(2, 5), r.clone()),
                (Rat::new(3, 5), r.clone()),
                (Rat::one(), Rat::zero()),
            ]),
            MapFamily::Custom(f) => Ok(f.clone()),
            _ => Err(Error::NotPiecewiseLinear(format!("{} map", self.kind()))),
        }
    }

    /// `f(1/2)` for the symmetric kinds; the maximum for custom maps.
    pub fn max_value_f64(&self) -> f64 {
        match self {
            MapFamily::Custom(f) => f.max_value().to_f64(),
            _ => self.r_f64(),
        }
    }

    /// Exact preimages of `y` (ascending). Tent and custom maps only; the
    /// flat-tent plateau value returns the plateau endpoints.
    pub fn preimages_exact(&self, y: &Rat) -> Result<Vec<Rat>> {
        if !y.in_unit_interval() {
            return Err(Error::OutOfRange(format!("y = {y} outside [0,1]")));
        }
        match self {
            MapFamily::Tent(r) => {
                if y > r {
                    return Ok(vec![]);
                }
                if y == r {
                    return Ok(vec![Rat::half()]);
                }
                let x = y / (Rat::int(2) * r);
                let x2 = Rat::one() - &x;
                Ok(vec![x, x2])
            }
            MapFamily::FlatTent(_) | MapFamily::Custom(_) => Ok(pl_preimages(&self.to_pl()?, y)),
            _ => Err(Error::NotPiecewiseLinear(format!(
                "{} has no exact preimages",
                self.kind()
            ))),
        }
    }

    /// Floating-point preimages (ascending). Values within [`APEX_TOL`] of
    /// the maximum return the apex alone.
    pub fn preimages_f64(&self, y: f64) -> Vec<f64> {
        let top = self.max_value_f64();
        if y > top + APEX_TOL || y < 0.0 {
            return vec![];
        }
        match self {
            MapFamily::Logistic(r) => {
                if y >= top - APEX_TOL {
                    return vec![0.5];
                }
                let s = (1.0 - y / r).max(0.0).sqrt();
                vec![(1.0 - s) / 2.0, (1.0 + s) / 2.0]
            }
            MapFamily::Sine(r) => {
                if y >= top - APEX_TOL {
                    return vec![0.5];
                }
                let x = (y / r).min(1.0).asin() / PI;
                vec![x, 1.0 - x]
            }
            MapFamily::Tent(r) => {
                if y >= top - APEX_TOL {
                    return vec![0.5];
                }
                let x = y / (2.0 * r.to_f64());
                vec![x, 1.0 - x]
            }
            MapFamily::FlatTent(_) | MapFamily::Custom(_) => {
                let f = self.to_pl().expect("exact kind");
                match Rat::from_f64(y.min(top)) {
                    Ok(yr) => pl_preimages(&f, &yr).iter().map(Rat::to_f64).collect(),
                    Err(_) => vec![],
                }
            }
        }
    }

    /// Forward orbit `f(1/2), ..., f^K(1/2)`.
    pub fn critical_orbit(&self, k: usize) -> Result<CriticalOrbit> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "orbit length must be at least 1".into(),
            ));
        }
        if self.is_exact() {
            let mut x = Rat::half();
            let mut exact = Vec::with_capacity(k);
            for _ in 0..k {
                x = self.eval_exact(&x)?;
                exact.push(x.clone());
            }
            let values = exact.iter().map(Rat::to_f64).collect();
            Ok(CriticalOrbit {
                values,
                exact: Some(exact),
                x_max: self.max_value_f64(),
            })
        } else {
            let mut x = 0.5;
            let mut values = Vec::with_capacity(k);
            for _ in 0..k {
                x = self.eval_f64(x);
                values.push(x);
            }
            Ok(CriticalOrbit {
                values,
                exact: None,
                x_max: self.max_value_f64(),
            })
        }
    }

    /// Checks `f(0) = f(1) = 0`, positivity on 101 interior grid points and
    /// the rise-then-fall shape.
    pub fn audit(&self) -> Result<Unimodality> {
        let bad = |what: &str| {
            Err(Error::Construction(format!(
                "{} fails unimodality audit: {what}",
                self.kind()
            )))
        };
        if self.eval_f64(0.0) != 0.0 || self.eval_f64(1.0).abs() > 1e-15 {
            return bad("nonzero at an endpoint");
        }
        for i in 1..=101 {
            let x = i as f64 / 102.0;
            if self.eval_f64(x) <= 0.0 {
                return bad("not positive inside");
            }
        }
        match self {
            MapFamily::FlatTent(_) => Ok(Unimodality::Weak),
            MapFamily::Custom(f) => {
                if f.is_strictly_unimodal() {
                    Ok(Unimodality::Strict)
                } else if f.is_weakly_unimodal() {
                    Ok(Unimodality::Weak)
                } else {
                    bad("not rise-then-fall")
                }
            }
            _ => Ok(Unimodality::Strict),
        }
    }

    pub fn descriptor(&self) -> MapDescriptor {
        MapDescriptor {
            kind: self.kind(),
            r: match self {
                MapFamily::Tent(r) | MapFamily::FlatTent(r) => Some(r.to_string()),
                MapFamily::Logistic(r) | MapFamily::Sine(r) => Some(format!("{r}")),
                MapFamily::Custom(_) => None,
            },
            custom_pl: match self {
                MapFamily::Custom(f) => Some(f.clone()),
                _ => None,
            },
        }
    }
}

impl fmt::Display for MapFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapFamily::Custom(p) => write!(f, "custom({} pieces)", p.num_pieces()),
            MapFamily::Tent(r) | MapFamily::FlatTent(r) => write!(f, "{}(r={})", self.kind(), r),
            MapFamily::Logistic(r) | MapFamily::Sine(r) => write!(f, "{}(r={})", self.kind(), r),
        }
    }
}

/// All preimages of `y` under a PL map, ascending; flat pieces at level `y`
/// contribute their endpoints.
pub(crate) fn pl_preimages(f: &PiecewiseLinear, y: &Rat) -> Vec<Rat> {
    let xs = f.xs();
    let ys = f.ys();
    let mut out: Vec<Rat> = Vec::new();
    let mut push = |x: Rat| {
        if out.last() != Some(&x) {
            out.push(x);
        }
    };
    for i in 0..xs.len() {
        if i > 0 {
            let (y0, y1) = (&ys[i - 1], &ys[i]);
            let inside = (y0 < y && y < y1) || (y1 < y && y < y0);
            if inside {
                let (x0, x1) = (&xs[i - 1], &xs[i]);
                push(x0 + (y - y0) * (x1 - x0) / (y1 - y0));
            }
        }
        if &ys[i] == y {
            push(xs[i].clone());
        }
    }
    out
}

/// The half-orbit `f(1/2), f^2(1/2), ...`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalOrbit {
    pub values: Vec<f64>,
    pub exact: Option<Vec<Rat>>,
    pub x_max: f64,
}

/// JSON form `{kind, r, custom_pl?}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapDescriptor {
    pub kind: MapKind,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        deserialize_with = "de_param"
    )]
    pub r: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_pl: Option<PiecewiseLinear>,
}

/// Accepts `r` as a JSON string or number.
fn de_param<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<Option<String>, D::Error> {
    let v: Option<serde_json::Value> = Option::deserialize(d)?;
    Ok(match v {
        None | Some(serde_json::Value::Null) => None,
        Some(serde_json::Value::String(s)) => Some(s),
        Some(other) => Some(other.to_string()),
    })
}

impl MapDescriptor {
    pub fn build(&self) -> Result<MapFamily> {
        if self.kind == MapKind::CustomPl {
            let f = self
                .custom_pl
                .clone()
                .ok_or_else(|| Error::InvalidArgument("custom map needs custom_pl".into()))?;
            return MapFamily::custom(f);
        }
        let r = self
            .r
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument(format!("{} map needs r", self.kind)))?;
        match self.kind {
            MapKind::Tent => MapFamily::tent(r.parse()?),
            MapKind::FlatTent => MapFamily::flat_tent(r.parse()?),
            MapKind::Logistic | MapKind::Sine => {
                let v: f64 = match r.parse::<f64>() {
                    Ok(v) => v,
                    Err(_) => r.parse::<Rat>()?.to_f64(),
                };
                if self.kind == MapKind::Logistic {
                    MapFamily::logistic(v)
                } else {
                    MapFamily::sine(v)
                }
            }
            MapKind::CustomPl => unreachable!(),
        }
    }
}

impl Serialize for MapFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.descriptor().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MapFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MapDescriptor::deserialize(d)?
            .build()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let t = MapFamily::tent(Rat::one()).unwrap();
        assert_eq!(t.eval_exact(&Rat::half()).unwrap(), Rat::one());
        let phi4 = (1.0 + 5f64.sqrt()) / 4.0;
        let l = MapFamily::logistic(phi4).unwrap();
        assert!((l.eval_f64(0.5) - 0.809017).abs() < 1e-6);
        let ft = MapFamily::flat_tent(Rat::half()).unwrap();
        assert_eq!(ft.eval_exact(&Rat::half()).unwrap(), Rat::half());
        assert!(t.eval_exact(&Rat::new(3, 2)).is_err());
        assert!(l.eval_exact(&Rat::half()).is_err());
    }

    #[test]
    fn to_pl_examples() {
        let t = MapFamily::tent(Rat::new(4, 5)).unwrap().to_pl().unwrap();
        assert_eq!(t.to_json(), "[[0,1,0,1],[1,2,4,5],[1,1,0,1]]");
        let ft = MapFamily::flat_tent(Rat::half()).unwrap().to_pl().unwrap();
        assert_eq!(
            ft,
            PiecewiseLinear::from_fracs(&[(0, 1, 0, 1), (2, 5, 1, 2), (3, 5, 1, 2), (1, 1, 0, 1)])
                .unwrap()
        );
        assert!(matches!(
            MapFamily::logistic(0.9).unwrap().to_pl(),
            Err(Error::NotPiecewiseLinear(_))
        ));
    }

    #[test]
    fn preimage_examples() {
        let t = MapFamily::tent(Rat::one()).unwrap();
        assert_eq!(
            t.preimages_exact(&Rat::half()).unwrap(),
            vec![Rat::new(1, 4), Rat::new(3, 4)]
        );
        assert_eq!(
            MapFamily::logistic(1.0).unwrap().preimages_f64(1.0),
            vec![0.5]
        );
        assert!(MapFamily::logistic(0.5)
            .unwrap()
            .preimages_f64(0.75)
            .is_empty());
        let ft = MapFamily::flat_tent(Rat::half()).unwrap();
        assert_eq!(
            ft.preimages_exact(&Rat::new(1, 4)).unwrap(),
            vec![Rat::new(1, 5), Rat::new(4, 5)]
        );
    }

    #[test]
    fn critical_orbit_examples() {
        let t = MapFamily::tent(Rat::one()).unwrap();
        let o = t.critical_orbit(3).unwrap();
        assert_eq!(o.exact.unwrap(), vec![Rat::one(), Rat::zero(), Rat::zero()]);
        let l = MapFamily::logistic(0.9580).unwrap();
        let o = l.critical_orbit(4).unwrap();
        assert!((o.values[2] - 0.5).abs() < 1e-3);
    }

    #[test]
    fn audit_flags_plateau() {
        assert_eq!(
            MapFamily::flat_tent(Rat::half()).unwrap().audit().unwrap(),
            Unimodality::Weak
        );
        assert_eq!(
            MapFamily::sine(0.3).unwrap().audit().unwrap(),
            Unimodality::Strict
        );
        assert!(MapFamily::tent(Rat::zero()).is_err());
        assert!(MapFamily::logistic(1.5).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        let m = MapFamily::tent(Rat::new(4, 5)).unwrap();
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"{"kind":"tent","r":"4/5"}"#);
        assert_eq!(serde_json::from_str::<MapFamily>(&js).unwrap(), m);
        let l: MapFamily = serde_json::from_str(r#"{"kind":"logistic","r":0.9580}"#).unwrap();
        assert_eq!(l, MapFamily::Logistic(0.958));
        let c: MapFamily = serde_json::from_str(
            r#"{"kind":"custom","custom_pl":[[0,1,0,1],[1,2,1,1],[1,1,0,1]]}"#,
        )
        .unwrap();
        assert_eq!(
            c.to_pl().unwrap(),
            PiecewiseLinear::tent(&Rat::one()).unwrap()
        );
    }
}
