//! Scalar ReLU networks on `[0,1]`, exact synthesis from PL functions and
//! exact PL extraction.
//!
//! Layers are affine maps with ReLU after every layer except the last.
//! Weights are either exact rationals or floats; only all-rational networks
//! convert back to [`PiecewiseLinear`].

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::maps::MapFamily;
use crate::oscillation::turning_points_f64;
use crate::pl::{PiecewiseLinear, Spline, DEFAULT_KNOT_CAP};
use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rat),
    Float(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rat> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }
}

impl From<Rat> for Scalar {
    fn from(r: Rat) -> Scalar {
        Scalar::Exact(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::Exact(Rat::int(n))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => s.serialize_str(&r.to_string()),
            Scalar::Float(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        use serde::de::Error as _;
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => s
                .parse::<Rat>()
                .map(Scalar::Exact)
                .map_err(D::Error::custom),
            serde_json::Value::Number(n) => n
                .as_f64()
                .map(Scalar::Float)
                .ok_or_else(|| D::Error::custom(format!("weight {n} is not representable"))),
            other => Err(D::Error::custom(format!("expected a weight, got {other}"))),
        }
    }
}

/// `x -> w x + b`, with `w` stored row-major as `out × in`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub w: Vec<Vec<Scalar>>,
    pub b: Vec<Scalar>,
}

impl Layer {
    pub fn new(w: Vec<Vec<Scalar>>, b: Vec<Scalar>) -> Result<Layer> {
        if w.is_empty() || w.len() != b.len() {
            return Err(Error::InvalidArgument(format!(
                "{} weight rows but {} biases",
                w.len(),
                b.len()
            )));
        }
        let n_in = w[0].len();
        if n_in == 0 || w.iter().any(|row| row.len() != n_in) {
            return Err(Error::InvalidArgument("ragged weight matrix".into()));
        }
        Ok(Layer { w, b })
    }

    pub fn n_in(&self) -> usize {
        self.w[0].len()
    }

    pub fn n_out(&self) -> usize {
        self.w.len()
    }

    fn is_exact(&self) -> bool {
        self.w
            .iter()
            .flatten()
            .chain(&self.b)
            .all(|s| s.as_exact().is_some())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReluNetwork {
    layers: Vec<Layer>,
}

#[derive(Serialize, Deserialize)]
struct NetworkJson {
    layers: Vec<Layer>,
    activation: String,
}

impl Serialize for ReluNetwork {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NetworkJson {
            layers: self.layers.clone(),
            activation: "relu".into(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ReluNetwork {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<ReluNetwork, D::Error> {
        use serde::de::Error as _;
        let j = NetworkJson::deserialize(d)?;
        if j.activation != "relu" {
            return Err(D::Error::custom(format!(
                "unsupported activation {:?}",
                j.activation
            )));
        }
        ReluNetwork::new(j.layers).map_err(D::Error::custom)
    }
}

impl ReluNetwork {
    pub fn new(layers: Vec<Layer>) -> Result<ReluNetwork> {
        let (first, last) = match (layers.first(), layers.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => {
                return Err(Error::InvalidArgument(
                    "network needs at least one layer".into(),
                ))
            }
        };
        if first.n_in() != 1 || last.n_out() != 1 {
            return Err(Error::InvalidArgument(
                "input and output dimension must be 1".into(),
            ));
        }
        for (i, w) in layers.windows(2).enumerate() {
            if w[0].n_out() != w[1].n_in() {
                return Err(Error::InvalidArgument(format!(
                    "layer {i} outputs {} values but layer {} takes {}",
                    w[0].n_out(),
                    i + 1,
                    w[1].n_in()
                )));
            }
        }
        Ok(ReluNetwork { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Number of affine layers.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Largest hidden dimension (0 for a single affine layer).
    pub fn width(&self) -> usize {
        self.layers[..self.layers.len() - 1]
            .iter()
            .map(Layer::n_out)
            .max()
            .unwrap_or(0)
    }

    pub fn is_exact(&self) -> bool {
        self.layers.iter().all(Layer::is_exact)
    }

    /// `ReLU(x)` followed by the identity read-out.
    pub fn identity() -> ReluNetwork {
        ReluNetwork::new(vec![
            Layer::new(vec![vec![1.into()]], vec![0.into()]).expect("valid"),
            Layer::new(vec![vec![1.into()]], vec![0.into()]).expect("valid"),
        ])
        .expect("valid")
    }

    pub fn constant(c: Rat) -> ReluNetwork {
        ReluNetwork::new(vec![
            Layer::new(vec![vec![0.into()]], vec![c.into()]).expect("valid")
        ])
        .expect("valid")
    }

    /// `ReLU(2x) - ReLU(4x - 2)`, the full-height tent.
    pub fn tent_block() -> ReluNetwork {
        ReluNetwork::new(vec![
            Layer::new(
                vec![vec![2.into()], vec![4.into()]],
                vec![0.into(), (-2).into()],
            )
            .expect("valid"),
            Layer::new(vec![vec![1.into(), (-1).into()]], vec![0.into()]).expect("valid"),
        ])
        .expect("valid")
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut h = vec![x];
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            h = layer
                .w
                .iter()
                .zip(&layer.b)
                .map(|(row, b)| {
                    let z =
                        row.iter().zip(&h).map(|(w, v)| w.to_f64() * v).sum::<f64>() + b.to_f64();
                    if i < last {
                        z.max(0.0)
                    } else {
                        z
                    }
                })
                .collect();
        }
        h[0]
    }

    pub fn eval_exact(&self, x: &Rat) -> Result<Rat> {
        let mut h = vec![x.clone()];
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            let mut next = Vec::with_capacity(layer.n_out());
            for (row, b) in layer.w.iter().zip(&layer.b) {
                let mut z = exact(b)?.clone();
                for (w, v) in row.iter().zip(&h) {
                    z = z + exact(w)? * v;
                }
                next.push(if i < last && z.is_negative() {
                    Rat::zero()
                } else {
                    z
                });
            }
            h = next;
        }
        Ok(h.swap_remove(0))
    }
}

fn exact(s: &Scalar) -> Result<&Rat> {
    s.as_exact()
        .ok_or_else(|| Error::InvalidArgument("exact evaluation needs rational weights".into()))
}

/// Depth-2 network with one hidden unit per linear piece:
/// `f(0) + s_0 ReLU(x) + Σ_i (s_i - s_{i-1}) ReLU(x - x_i)`.
pub fn synth_from_pl(f: &PiecewiseLinear) -> ReluNetwork {
    let xs = f.xs();
    let spline = f.spline();
    let n = f.num_pieces();
    let mut w1 = Vec::with_capacity(n);
    let mut b1 = Vec::with_capacity(n);
    let mut w2 = Vec::with_capacity(n);
    let mut prev = Rat::zero();
    for i in 0..n {
        let s = spline.slope(i);
        w1.push(vec![Scalar::from(1)]);
        b1.push(Scalar::Exact(-&xs[i]));
        w2.push(Scalar::Exact(&s - &prev));
        prev = s;
    }
    ReluNetwork::new(vec![
        Layer::new(w1, b1).expect("valid"),
        Layer::new(vec![w2], vec![Scalar::Exact(f.ys()[0].clone())]).expect("valid"),
    ])
    .expect("valid")
}

/// The exact function computed on `[0,1]`. Output outside `[0,1]` is
/// reported as a codomain violation.
pub fn net_to_pl(n: &ReluNetwork) -> Result<PiecewiseLinear> {
    net_to_spline(n, DEFAULT_KNOT_CAP).and_then(PiecewiseLinear::from_spline)
}

/// Pairwise summation keeps wide layers near `n log n` knot merges.
fn tree_sum(mut terms: Vec<Spline>) -> Spline {
    while terms.len() > 1 {
        terms = terms
            .chunks(2)
            .map(|c| match c {
                [a, b] => a.add(b),
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    terms.swap_remove(0)
}

/// Exact propagation without the codomain audit.
pub fn net_to_spline(n: &ReluNetwork, cap: usize) -> Result<Spline> {
    if !n.is_exact() {
        return Err(Error::InvalidArgument(
            "net_to_pl needs rational weights".into(),
        ));
    }
    let mut h = vec![Spline::identity()];
    let last = n.layers.len() - 1;
    for (i, layer) in n.layers.iter().enumerate() {
        let mut next = Vec::with_capacity(layer.n_out());
        for (row, b) in layer.w.iter().zip(&layer.b) {
            let mut terms = vec![Spline::constant(exact(b)?.clone())];
            for (w, v) in row.iter().zip(&h) {
                let w = exact(w)?;
                if !w.is_zero() {
                    terms.push(v.scale(w));
                }
            }
            let mut z = tree_sum(terms);
            if i < last {
                z = z.relu();
            }
            if z.num_knots() > cap {
                return Err(Error::ResourceCap {
                    what: "network knots",
                    needed: z.num_knots(),
                    cap,
                });
            }
            next.push(z);
        }
        h = next;
    }
    Ok(h.swap_remove(0))
}

/// `k`-fold composition by concatenating the block's layers. Block outputs
/// are nonnegative, so the ReLU placed after each intermediate read-out is
/// exact. Depth multiplies by `k`; width is unchanged.
pub fn stack(block: &ReluNetwork, k: usize) -> Result<ReluNetwork> {
    if k == 0 {
        return Err(Error::InvalidArgument("stack needs k >= 1".into()));
    }
    if block.is_exact() {
        net_to_pl(block)?;
    }
    let mut layers = Vec::with_capacity(block.depth() * k);
    for _ in 0..k {
        layers.extend(block.layers.iter().cloned());
    }
    ReluNetwork::new(layers)
}

/// PL approximant within `ε` in sup norm: on each monotone piece of `f`,
/// knots where `f` first reaches `y_start ± jε`. For `ε >= 1` returns the
/// constant `1/2`.
pub fn eps_approx(f: &PiecewiseLinear, eps: &Rat) -> Result<PiecewiseLinear> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "ε must be positive, got {eps}"
        )));
    }
    if eps >= &Rat::one() {
        return PiecewiseLinear::constant(Rat::half());
    }
    let xs = f.xs();
    let ys = f.ys();
    let mut knots: Vec<(Rat, Rat)> = vec![(xs[0].clone(), ys[0].clone())];
    for (s, e) in monotone_segments(ys) {
        let up = ys[e] > ys[s];
        let mut level = ys[s].clone();
        let mut piece = s;
        loop {
            level = if up { level + eps } else { level - eps };
            if (up && level >= ys[e]) || (!up && level <= ys[e]) {
                break;
            }
            // first knot at or past `level`, then interpolate back
            while (up && ys[piece + 1] < level) || (!up && ys[piece + 1] > level) {
                piece += 1;
            }
            let (x0, y0, x1, y1) = (&xs[piece], &ys[piece], &xs[piece + 1], &ys[piece + 1]);
            let x = x0 + (&level - y0) * (x1 - x0) / (y1 - y0);
            knots.push((x, level.clone()));
        }
        knots.push((xs[e].clone(), ys[e].clone()));
    }
    PiecewiseLinear::new(knots)
}

/// Knot index ranges of the maximal monotone pieces; flats join the
/// piece they follow.
fn monotone_segments(ys: &[Rat]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut dir = 0;
    for i in 0..ys.len() - 1 {
        let s = (&ys[i + 1] - &ys[i]).signum();
        if s != 0 && dir != 0 && s != dir {
            out.push((start, i));
            start = i;
        }
        if s != 0 {
            dir = s;
        }
    }
    out.push((start, ys.len() - 1));
    out
}

/// PL interpolant of a smooth map's `f^k` with equal `y`-spacing `ε` on
/// each monotone piece; knots are solved by bisection and stored exactly.
pub fn secant_eps_approx(m: &MapFamily, k: usize, eps: f64) -> Result<PiecewiseLinear> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "ε must be positive, got {eps}"
        )));
    }
    let fk = |x: f64| (0..k).fold(x, |v, _| m.eval_f64(v));
    let mut bounds = vec![0.0];
    bounds.extend(turning_points_f64(m, k)?);
    bounds.push(1.0);
    let mut knots: Vec<(f64, f64)> = vec![(0.0, fk(0.0))];
    for w in bounds.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (ylo, yhi) = (fk(lo), fk(hi));
        let up = yhi > ylo;
        let n = ((yhi - ylo).abs() / eps).ceil() as usize;
        for j in 1..n {
            let level = if up {
                ylo + j as f64 * eps
            } else {
                ylo - j as f64 * eps
            };
            let (mut a, mut b) = (lo, hi);
            while b - a > 1e-15 {
                let mid = 0.5 * (a + b);
                if (fk(mid) < level) == up {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            knots.push((0.5 * (a + b), level));
        }
        knots.push((hi, yhi));
    }
    let mut exact: Vec<(Rat, Rat)> = Vec::with_capacity(knots.len());
    for (x, y) in knots {
        let x = Rat::from_f64(x)?;
        if exact.last().is_some_and(|(px, _)| px >= &x) {
            continue;
        }
        exact.push((x, Rat::from_f64(y.clamp(0.0, 1.0))?));
    }
    PiecewiseLinear::new(exact)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthWidthReport {
    pub k: usize,
    pub block_pieces: usize,
    pub deep_width: usize,
    pub deep_depth: usize,
    pub shallow_width: usize,
    pub monotone_pieces_fk: usize,
}

/// Exact deep stack of `f` against the exact depth-2 net for `f^k`; both
/// are checked to compute `f^k`.
pub fn depth_width_demo(f: &PiecewiseLinear, k: usize) -> Result<DepthWidthReport> {
    let block = synth_from_pl(f);
    let deep = stack(&block, k)?;
    let fk = f.iterate(k)?;
    let shallow = synth_from_pl(&fk);
    if net_to_pl(&deep)? != fk || net_to_pl(&shallow)? != fk {
        return Err(Error::Construction(
            "networks disagree with the iterate".into(),
        ));
    }
    Ok(DepthWidthReport {
        k,
        block_pieces: f.num_pieces(),
        deep_width: deep.width(),
        deep_depth: deep.depth(),
        shallow_width: shallow.width(),
        monotone_pieces_fk: fk.monotone_pieces(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tent_block_apex() {
        let t = ReluNetwork::tent_block();
        assert_eq!(t.eval_exact(&Rat::half()).unwrap(), Rat::one());
        assert_eq!(t.eval_f64(0.25), 0.5);
        assert_eq!(
            net_to_pl(&t).unwrap(),
            PiecewiseLinear::tent(&Rat::one()).unwrap()
        );
        let id = ReluNetwork::identity();
        assert_eq!(id.eval_exact(&Rat::new(2, 7)).unwrap(), Rat::new(2, 7));
        assert_eq!(ReluNetwork::constant(Rat::zero()).eval_f64(0.3), 0.0);
    }

    #[test]
    fn synth_widths() {
        let t = PiecewiseLinear::tent(&Rat::one()).unwrap();
        let n = synth_from_pl(&t);
        assert_eq!((n.width(), n.depth()), (2, 2));
        let t4 = t.iterate(4).unwrap();
        let n4 = synth_from_pl(&t4);
        assert_eq!(n4.width(), 16);
        assert_eq!(net_to_pl(&n4).unwrap(), t4);
    }

    #[test]
    fn stacking_matches_iteration() {
        let t = PiecewiseLinear::tent(&Rat::one()).unwrap();
        for k in 1..=5 {
            let s = stack(&ReluNetwork::tent_block(), k).unwrap();
            assert_eq!(s.width(), 2);
            assert_eq!(s.depth(), 2 * k);
            assert_eq!(net_to_pl(&s).unwrap(), t.iterate(k).unwrap());
        }
        let id = stack(&ReluNetwork::identity(), 5).unwrap();
        assert_eq!(net_to_pl(&id).unwrap(), PiecewiseLinear::identity());
        assert!(stack(&ReluNetwork::identity(), 0).is_err());
        assert_eq!(
            net_to_pl(&ReluNetwork::constant(Rat::half()))
                .unwrap()
                .num_pieces(),
            1
        );
    }

    #[test]
    fn codomain_reported() {
        let doubled = ReluNetwork::new(vec![
            Layer::new(vec![vec![2.into()]], vec![0.into()]).unwrap()
        ])
        .unwrap();
        assert!(matches!(
            net_to_pl(&doubled),
            Err(Error::CodomainViolation { .. })
        ));
    }

    #[test]
    fn eps_approx_tent() {
        let t = PiecewiseLinear::tent(&Rat::one()).unwrap();
        let g = eps_approx(&t, &Rat::new(1, 4)).unwrap();
        assert!(g.num_pieces() <= 9);
        assert!(t.linf_diff(&g) <= Rat::new(1, 4));
        let c = eps_approx(&t, &Rat::one()).unwrap();
        assert_eq!(c.num_pieces(), 1);
        assert_eq!(c.eval(&Rat::zero()).unwrap(), Rat::half());
        let f3 = t.iterate(3).unwrap();
        let g3 = eps_approx(&f3, &Rat::new(3, 10)).unwrap();
        assert!(f3.linf_diff(&g3) <= Rat::new(3, 10));
        assert!(g3.num_pieces() <= 8 * 4 + 1);
    }

    #[test]
    fn json_round_trip() {
        let n = synth_from_pl(
            &PiecewiseLinear::from_fracs(&[(0, 1, 0, 1), (1, 3, 2, 3), (1, 1, 1, 5)]).unwrap(),
        );
        let s = serde_json::to_string(&n).unwrap();
        assert!(s.contains("\"activation\":\"relu\""));
        assert!(s.contains("\"-1/3\""));
        let back: ReluNetwork = serde_json::from_str(&s).unwrap();
        assert_eq!(back, n);
        let float: ReluNetwork =
            serde_json::from_str(r#"{"layers":[{"w":[[0.5]],"b":[0.25]}],"activation":"relu"}"#)
                .unwrap();
        assert!(!float.is_exact());
        assert_eq!(float.eval_f64(0.5), 0.5);
        assert!(serde_json::from_str::<ReluNetwork>(
            r#"{"layers":[{"w":[[1]],"b":["0"]}],"activation":"tanh"}"#
        )
        .is_err());
    }

    #[test]
    fn smooth_secant_within_eps() {
        let m = MapFamily::logistic(0.8671).unwrap();
        let g = secant_eps_approx(&m, 4, 0.05).unwrap();
        let worst = (0..=2000)
            .map(|i| {
                let x = i as f64 / 2000.0;
                let fx = (0..4).fold(x, |v, _| m.eval_f64(v));
                (fx - g.eval_f64(x)).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst <= 0.05 + 1e-9, "{worst}");
    }
}
