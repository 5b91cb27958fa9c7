//! Exact continuous piecewise-linear functions on `[0,1]`.
//!
//! [`Spline`] is the unconstrained carrier (any knot values), used for ReLU
//! network propagation and for differences of functions. [`PiecewiseLinear`]
//! is a `Spline` whose values stay in `[0,1]`; it is the exact representation
//! of `f^k` and of every network output function. Both are kept in canonical
//! form: no three consecutive knots are collinear.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Default cap on the knot count of iterates and network conversions.
pub const DEFAULT_KNOT_CAP: usize = 10_000_000;

/// Continuous piecewise-linear function on `[0,1]` with arbitrary rational values.
#[derive(Clone, PartialEq, Eq)]
pub struct Spline {
    xs: Vec<Rat>,
    ys: Vec<Rat>,
}

fn collinear(x0: &Rat, y0: &Rat, x1: &Rat, y1: &Rat, x2: &Rat, y2: &Rat) -> bool {
    (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0)
}

impl Spline {
    /// Build from knots; x must be strictly increasing from 0 to 1.
    pub fn new(knots: Vec<(Rat, Rat)>) -> Result<Spline> {
        if knots.len() < 2 {
            return Err(Error::InvalidKnots("need at least two knots".into()));
        }
        if !knots[0].0.is_zero() || knots[knots.len() - 1].0 != Rat::one() {
            return Err(Error::InvalidKnots("knots must span [0,1]".into()));
        }
        for w in knots.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidKnots(format!(
                    "x not strictly increasing at {} -> {}",
                    w[0].0, w[1].0
                )));
            }
        }
        let (xs, ys) = knots.into_iter().unzip();
        Ok(Spline::canonical(xs, ys))
    }

    /// Caller guarantees the x invariants; removes collinear interior knots.
    pub(crate) fn canonical(xs: Vec<Rat>, ys: Vec<Rat>) -> Spline {
        debug_assert_eq!(xs.len(), ys.len());
        let mut ox: Vec<Rat> = Vec::with_capacity(xs.len());
        let mut oy: Vec<Rat> = Vec::with_capacity(ys.len());
        for (x, y) in xs.into_iter().zip(ys) {
            while ox.len() >= 2 {
                let n = ox.len();
                if collinear(&ox[n - 2], &oy[n - 2], &ox[n - 1], &oy[n - 1], &x, &y) {
                    ox.pop();
                    oy.pop();
                } else {
                    break;
                }
            }
            ox.push(x);
            oy.push(y);
        }
        Spline { xs: ox, ys: oy }
    }

    pub fn constant(c: Rat) -> Spline {
        Spline {
            xs: vec![Rat::zero(), Rat::one()],
            ys: vec![c.clone(), c],
        }
    }

    pub fn identity() -> Spline {
        Spline {
            xs: vec![Rat::zero(), Rat::one()],
            ys: vec![Rat::zero(), Rat::one()],
        }
    }

    pub fn xs(&self) -> &[Rat] {
        &self.xs
    }

    pub fn ys(&self) -> &[Rat] {
        &self.ys
    }

    pub fn knots(&self) -> impl Iterator<Item = (&Rat, &Rat)> {
        self.xs.iter().zip(self.ys.iter())
    }

    pub fn num_knots(&self) -> usize {
        self.xs.len()
    }

    pub fn num_pieces(&self) -> usize {
        self.xs.len() - 1
    }

    pub fn slope(&self, piece: usize) -> Rat {
        (&self.ys[piece + 1] - &self.ys[piece]) / (&self.xs[piece + 1] - &self.xs[piece])
    }

    pub fn min_value(&self) -> &Rat {
        self.ys.iter().min().expect("nonempty")
    }

    pub fn max_value(&self) -> &Rat {
        self.ys.iter().max().expect("nonempty")
    }

    /// Exact value at `x`; at a knot, the knot value.
    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        if !x.in_unit_interval() {
            return Err(Error::OutOfRange(format!("x = {x} outside [0,1]")));
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &Rat) -> Rat {
        let i = self.xs.partition_point(|k| k <= x);
        if i == 0 {
            return self.ys[0].clone();
        }
        let i = i - 1;
        if &self.xs[i] == x || i + 1 == self.xs.len() {
            return self.ys[i].clone();
        }
        let t = (x - &self.xs[i]) / (&self.xs[i + 1] - &self.xs[i]);
        &self.ys[i] + t * (&self.ys[i + 1] - &self.ys[i])
    }

    /// Values at an ascending list of points, in one sweep.
    pub(crate) fn values_at_sorted(&self, pts: &[Rat]) -> Vec<Rat> {
        let mut out = Vec::with_capacity(pts.len());
        let mut i = 0usize;
        for x in pts {
            while i + 1 < self.xs.len() - 1 && &self.xs[i + 1] <= x {
                i += 1;
            }
            if x == &self.xs[i] {
                out.push(self.ys[i].clone());
            } else if x == &self.xs[i + 1] {
                out.push(self.ys[i + 1].clone());
            } else {
                let t = (x - &self.xs[i]) / (&self.xs[i + 1] - &self.xs[i]);
                out.push(&self.ys[i] + t * (&self.ys[i + 1] - &self.ys[i]));
            }
        }
        out
    }

    fn merged_xs(&self, other: &Spline) -> Vec<Rat> {
        let mut out = Vec::with_capacity(self.xs.len() + other.xs.len());
        let (mut i, mut j) = (0, 0);
        while i < self.xs.len() || j < other.xs.len() {
            let take_self = j >= other.xs.len() || (i < self.xs.len() && self.xs[i] <= other.xs[j]);
            let x = if take_self { &self.xs[i] } else { &other.xs[j] };
            if out.last() != Some(x) {
                out.push(x.clone());
            }
            if take_self {
                i += 1;
            } else {
                j += 1;
            }
        }
        out
    }

    /// Pointwise `self + other`.
    pub fn add(&self, other: &Spline) -> Spline {
        let xs = self.merged_xs(other);
        let a = self.values_at_sorted(&xs);
        let b = other.values_at_sorted(&xs);
        let ys = a.into_iter().zip(b).map(|(u, v)| u + v).collect();
        Spline::canonical(xs, ys)
    }

    /// Pointwise `self - other`.
    pub fn sub(&self, other: &Spline) -> Spline {
        self.add(&other.scale(&Rat::int(-1)))
    }

    pub fn scale(&self, c: &Rat) -> Spline {
        if c.is_zero() {
            return Spline::constant(Rat::zero());
        }
        Spline {
            xs: self.xs.clone(),
            ys: self.ys.iter().map(|y| y * c).collect(),
        }
    }

    pub fn shift(&self, c: &Rat) -> Spline {
        Spline {
            xs: self.xs.clone(),
            ys: self.ys.iter().map(|y| y + c).collect(),
        }
    }

    /// Pointwise `max(0, self)`; new knots at zero crossings.
    pub fn relu(&self) -> Spline {
        let mut xs = Vec::with_capacity(self.xs.len() + 4);
        let mut ys = Vec::with_capacity(self.xs.len() + 4);
        for i in 0..self.xs.len() {
            if i > 0 {
                let (y0, y1) = (&self.ys[i - 1], &self.ys[i]);
                if (y0.is_negative() && y1.is_positive()) || (y0.is_positive() && y1.is_negative())
                {
                    let (x0, x1) = (&self.xs[i - 1], &self.xs[i]);
                    let xz = x0 + (-y0) * (x1 - x0) / (y1 - y0);
                    xs.push(xz);
                    ys.push(Rat::zero());
                }
            }
            xs.push(self.xs[i].clone());
            ys.push(if self.ys[i].is_negative() {
                Rat::zero()
            } else {
                self.ys[i].clone()
            });
        }
        Spline::canonical(xs, ys)
    }

    /// Exact `outer(self(x))`, where `outer` is evaluated at values of
    /// `self`; values of `self` must stay in `[0,1]`.
    pub(crate) fn then(&self, outer: &Spline) -> Spline {
        let ox = &outer.xs;
        let mut xs = Vec::with_capacity(self.xs.len() * 2);
        let mut ys = Vec::with_capacity(self.xs.len() * 2);
        let n = self.xs.len();
        for i in 0..n {
            let (xi, yi) = (&self.xs[i], &self.ys[i]);
            xs.push(xi.clone());
            ys.push(outer.eval_unchecked(yi));
            if i + 1 == n {
                break;
            }
            let (xj, yj) = (&self.xs[i + 1], &self.ys[i + 1]);
            if yi == yj {
                continue;
            }
            let (lo, hi) = if yi < yj { (yi, yj) } else { (yj, yi) };
            let start = ox.partition_point(|u| u <= lo);
            let end = ox.partition_point(|u| u < hi);
            if start >= end {
                continue;
            }
            let dx_dy = (xj - xi) / (yj - yi);
            let mut push = |idx: usize| {
                let u = &ox[idx];
                xs.push(xi + (u - yi) * &dx_dy);
                ys.push(outer.ys[idx].clone());
            };
            if yi < yj {
                (start..end).for_each(&mut push);
            } else {
                (start..end).rev().for_each(&mut push);
            }
        }
        Spline::canonical(xs, ys)
    }

    pub fn monotone_pieces(&self) -> usize {
        let mut count = 1usize;
        let mut last = 0i32;
        for w in self.ys.windows(2) {
            let s = (&w[1] - &w[0]).signum();
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }
}

impl fmt::Debug for Spline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (x, y)) in self.knots().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        f.write_str("]")
    }
}

/// Continuous piecewise-linear `[0,1] -> [0,1]` in canonical minimal form.
#[derive(Clone, PartialEq, Eq)]
pub struct PiecewiseLinear {
    spline: Spline,
}

impl fmt::Debug for PiecewiseLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PiecewiseLinear{:?}", self.spline)
    }
}

impl PiecewiseLinear {
    /// Validates knots (x strictly increasing over `[0,1]`, y in `[0,1]`)
    /// and removes collinear interior knots.
    pub fn new(knots: Vec<(Rat, Rat)>) -> Result<PiecewiseLinear> {
        if let Some((x, y)) = knots.iter().find(|(_, y)| !y.in_unit_interval()) {
            return Err(Error::InvalidKnots(format!(
                "value {y} at x = {x} outside [0,1]"
            )));
        }
        Ok(PiecewiseLinear {
            spline: Spline::new(knots)?,
        })
    }

    /// Convenience constructor from small integer fractions `(xn, xd, yn, yd)`.
    pub fn from_fracs(knots: &[(i64, i64, i64, i64)]) -> Result<PiecewiseLinear> {
        PiecewiseLinear::new(
            knots
                .iter()
                .map(|&(a, b, c, d)| (Rat::new(a, b), Rat::new(c, d)))
                .collect(),
        )
    }

    pub fn from_spline(spline: Spline) -> Result<PiecewiseLinear> {
        let (lo, hi) = (spline.min_value(), spline.max_value());
        if lo.is_negative() || hi > &Rat::one() {
            return Err(Error::CodomainViolation {
                min: lo.to_string(),
                max: hi.to_string(),
            });
        }
        Ok(PiecewiseLinear { spline })
    }

    pub fn identity() -> PiecewiseLinear {
        PiecewiseLinear {
            spline: Spline::identity(),
        }
    }

    /// Constant function; `c` must be in `[0,1]`.
    pub fn constant(c: Rat) -> Result<PiecewiseLinear> {
        PiecewiseLinear::new(vec![(Rat::zero(), c.clone()), (Rat::one(), c)])
    }

    pub fn zero() -> PiecewiseLinear {
        PiecewiseLinear {
            spline: Spline::constant(Rat::zero()),
        }
    }

    /// `x -> 2 r min(x, 1-x)`; `r` in `(0,1]`.
    pub fn tent(r: &Rat) -> Result<PiecewiseLinear> {
        PiecewiseLinear::new(vec![
            (Rat::zero(), Rat::zero()),
            (Rat::half(), r.clone()),
            (Rat::one(), Rat::zero()),
        ])
    }

    pub fn spline(&self) -> &Spline {
        &self.spline
    }

    pub fn into_spline(self) -> Spline {
        self.spline
    }

    pub fn knots(&self) -> Vec<(Rat, Rat)> {
        self.spline
            .knots()
            .map(|(x, y)| (x.clone(), y.clone()))
            .collect()
    }

    pub fn xs(&self) -> &[Rat] {
        self.spline.xs()
    }

    pub fn ys(&self) -> &[Rat] {
        self.spline.ys()
    }

    pub fn num_knots(&self) -> usize {
        self.spline.num_knots()
    }

    /// Number of linear pieces.
    pub fn num_pieces(&self) -> usize {
        self.spline.num_pieces()
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        self.spline.eval(x)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        match Rat::from_f64(x.clamp(0.0, 1.0)) {
            Ok(r) => self.spline.eval_unchecked(&r).to_f64(),
            Err(_) => f64::NAN,
        }
    }

    pub fn max_value(&self) -> &Rat {
        self.spline.max_value()
    }

    /// Minimal number of maximal monotone intervals. Flat segments are
    /// absorbed by the neighbouring monotone piece.
    pub fn monotone_pieces(&self) -> usize {
        self.spline.monotone_pieces()
    }

    /// Maximum number of disjoint subintervals on which the function
    /// traverses `[a,b]` from one end to the other while staying inside it.
    pub fn crossings(&self, a: &Rat, b: &Rat) -> Result<usize> {
        Ok(self.crossing_events(a, b)?.len().saturating_sub(1))
    }

    /// Ordered alternating level hits: `(x, hits_b)` with consecutive
    /// entries on different levels. `len() - 1` is the crossing count.
    pub fn crossing_events(&self, a: &Rat, b: &Rat) -> Result<Vec<(Rat, bool)>> {
        if a >= b {
            return Err(Error::InvalidArgument(format!(
                "crossing interval needs a < b, got [{a}, {b}]"
            )));
        }
        let xs = self.spline.xs();
        let ys = self.spline.ys();
        let mut events: Vec<(Rat, bool)> = Vec::new();
        let mut push = |x: Rat, is_b: bool| {
            if events.last().map(|e| e.1) != Some(is_b) {
                events.push((x, is_b));
            }
        };
        for i in 0..xs.len() {
            let y = &ys[i];
            if i > 0 {
                let (x0, y0, x1) = (&xs[i - 1], &ys[i - 1], &xs[i]);
                let hit = |level: &Rat| x0 + (level - y0) * (x1 - x0) / (y - y0);
                if y0 < y {
                    if y0 < a && a < y {
                        push(hit(a), false);
                    }
                    if y0 < b && b < y {
                        push(hit(b), true);
                    }
                } else if y0 > y {
                    if y < b && b < y0 {
                        push(hit(b), true);
                    }
                    if y < a && a < y0 {
                        push(hit(a), false);
                    }
                }
            }
            if y == a {
                push(xs[i].clone(), false);
            } else if y == b {
                push(xs[i].clone(), true);
            }
        }
        Ok(events)
    }

    /// Composition `outer ∘ inner`.
    pub fn compose(inner: &PiecewiseLinear, outer: &PiecewiseLinear) -> PiecewiseLinear {
        PiecewiseLinear {
            spline: inner.spline.then(&outer.spline),
        }
    }

    /// `f^k` by repeated composition with the default knot cap.
    pub fn iterate(&self, k: usize) -> Result<PiecewiseLinear> {
        self.iterate_with_cap(k, DEFAULT_KNOT_CAP)
    }

    pub fn iterate_with_cap(&self, k: usize, cap: usize) -> Result<PiecewiseLinear> {
        let mut acc = PiecewiseLinear::identity();
        for _ in 0..k {
            let projected = acc
                .num_pieces()
                .saturating_mul(self.num_pieces())
                .saturating_add(1);
            if projected > cap {
                return Err(Error::ResourceCap {
                    what: "iterate knots",
                    needed: projected,
                    cap,
                });
            }
            acc = PiecewiseLinear::compose(&acc, self);
        }
        Ok(acc)
    }

    /// Exact `sup |f - g|`.
    pub fn linf_diff(&self, other: &PiecewiseLinear) -> Rat {
        let d = self.spline.sub(&other.spline);
        d.ys().iter().map(Rat::abs).max().expect("nonempty")
    }

    /// Exact `∫ |f - g|` over `[0,1]`.
    pub fn l1_diff(&self, other: &PiecewiseLinear) -> Rat {
        let d = self.spline.sub(&other.spline);
        let (xs, ys) = (d.xs(), d.ys());
        let mut total = Rat::zero();
        for i in 0..xs.len() - 1 {
            let h = &xs[i + 1] - &xs[i];
            let (d0, d1) = (&ys[i], &ys[i + 1]);
            if d0.signum() * d1.signum() >= 0 {
                total = total + (d0.abs() + d1.abs()) * &h / Rat::int(2);
            } else {
                let num = d0 * d0 + d1 * d1;
                let den = (d0.abs() + d1.abs()) * Rat::int(2);
                total = total + h * num / den;
            }
        }
        total
    }

    /// Fraction of sample points whose threshold labels disagree.
    pub fn classification_error(&self, other: &PiecewiseLinear, s: &SampleSet) -> Result<Rat> {
        if s.points.is_empty() {
            return Err(Error::InvalidArgument("empty sample set".into()));
        }
        let fa = self.spline.values_at_sorted(&s.points);
        let fb = other.spline.values_at_sorted(&s.points);
        let wrong = fa
            .iter()
            .zip(&fb)
            .filter(|(u, v)| (*u >= &s.threshold) != (*v >= &s.threshold))
            .count();
        Ok(Rat::new(wrong as i64, s.points.len() as i64))
    }

    /// Strict concavity in the weak sense: slopes never increase.
    pub fn is_concave(&self) -> bool {
        let n = self.num_pieces();
        (1..n).all(|i| self.spline.slope(i) <= self.spline.slope(i - 1))
    }

    /// `f(x) = f(1-x)` for all x.
    pub fn is_symmetric(&self) -> bool {
        let xs = self.xs();
        let ys = self.ys();
        let n = xs.len();
        (0..n).all(|i| xs[i] == Rat::one() - &xs[n - 1 - i] && ys[i] == ys[n - 1 - i])
    }

    /// Strictly increasing then strictly decreasing, zero at both ends.
    pub fn is_strictly_unimodal(&self) -> bool {
        let ys = self.ys();
        if !ys[0].is_zero() || !ys[ys.len() - 1].is_zero() {
            return false;
        }
        let mut descending = false;
        for w in ys.windows(2) {
            match (&w[1] - &w[0]).signum() {
                0 => return false,
                1 if descending => return false,
                -1 => descending = true,
                _ => {}
            }
        }
        descending && ys.len() >= 3
    }

    /// Zero at both ends, positive inside, non-decreasing then
    /// non-increasing (plateaus allowed).
    pub fn is_weakly_unimodal(&self) -> bool {
        let ys = self.ys();
        let n = ys.len();
        if !ys[0].is_zero() || !ys[n - 1].is_zero() || ys[1..n - 1].iter().any(|y| !y.is_positive())
        {
            return false;
        }
        let mut descending = false;
        for w in ys.windows(2) {
            match (&w[1] - &w[0]).signum() {
                1 if descending => return false,
                -1 => descending = true,
                _ => {}
            }
        }
        true
    }

    /// JSON array of `[x_num, x_den, y_num, y_den]` integer quadruples.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<PiecewiseLinear> {
        Ok(serde_json::from_str(s)?)
    }
}

fn big_number(n: &num_bigint::BigInt) -> serde_json::Number {
    n.to_string()
        .parse()
        .expect("integer literal is a JSON number")
}

impl Serialize for PiecewiseLinear {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<[serde_json::Number; 4]> = self
            .spline
            .knots()
            .map(|(x, y)| {
                [
                    big_number(x.numer()),
                    big_number(x.denom()),
                    big_number(y.numer()),
                    big_number(y.denom()),
                ]
            })
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiecewiseLinear {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows: Vec<[serde_json::Number; 4]> = Vec::deserialize(d)?;
        let int = |n: &serde_json::Number| -> std::result::Result<num_bigint::BigInt, D::Error> {
            n.to_string()
                .parse()
                .map_err(|_| D::Error::custom(format!("not an integer: {n}")))
        };
        let mut knots = Vec::with_capacity(rows.len());
        for r in &rows {
            let x = Rat::from_bigints(int(&r[0])?, int(&r[1])?).map_err(D::Error::custom)?;
            let y = Rat::from_bigints(int(&r[2])?, int(&r[3])?).map_err(D::Error::custom)?;
            knots.push((x, y));
        }
        PiecewiseLinear::new(knots).map_err(D::Error::custom)
    }
}

/// Sample points with a classification threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    points: Vec<Rat>,
    threshold: Rat,
}

impl SampleSet {
    pub fn new(points: Vec<Rat>, threshold: Rat) -> Result<SampleSet> {
        if threshold <= Rat::zero() || threshold >= Rat::one() {
            return Err(Error::OutOfRange(format!(
                "threshold {threshold} not in (0,1)"
            )));
        }
        if points.iter().any(|p| !p.in_unit_interval()) {
            return Err(Error::OutOfRange("sample point outside [0,1]".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "sample points must be strictly increasing".into(),
            ));
        }
        Ok(SampleSet { points, threshold })
    }

    pub fn points(&self) -> &[Rat] {
        &self.points
    }

    pub fn threshold(&self) -> &Rat {
        &self.threshold
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
