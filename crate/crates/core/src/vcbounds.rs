//! Weak VC-dimension upper bounds for sets of infinite label sequences,
//! and shattering witnesses for chaotic maps.
//!
//! The calculus tracks `N` with the bound equal to `log2 N`, so rules that
//! add logarithms multiply integers and the only rounding is the final
//! `⌈log2 N⌉`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycles::{find_cycles, fixed_points_of};
use crate::error::{Error, Result};
use crate::maps::MapFamily;
use crate::rat::Rat;

/// Constant in the interleave rule `4·max + c`.
pub const INTERLEAVE_CONSTANT: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegexExpr {
    /// `w^∞`
    RepInf(String),
    /// `w R`
    Prefix(String, Box<RegexExpr>),
    /// `w* R`
    Star(String, Box<RegexExpr>),
    Union(Box<RegexExpr>, Box<RegexExpr>),
    Interleave(Box<RegexExpr>, Box<RegexExpr>),
}

fn check_bits(w: &str) -> Result<()> {
    if w.is_empty() || !w.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::Parse(format!("{w:?} is not a nonempty bit string")));
    }
    Ok(())
}

impl RegexExpr {
    pub fn rep_inf(w: &str) -> Result<RegexExpr> {
        check_bits(w)?;
        Ok(RegexExpr::RepInf(w.into()))
    }

    pub fn prefix(w: &str, r: RegexExpr) -> Result<RegexExpr> {
        check_bits(w)?;
        Ok(RegexExpr::Prefix(w.into(), Box::new(r)))
    }

    pub fn star(w: &str, r: RegexExpr) -> Result<RegexExpr> {
        check_bits(w)?;
        Ok(RegexExpr::Star(w.into(), Box::new(r)))
    }

    pub fn union(a: RegexExpr, b: RegexExpr) -> RegexExpr {
        RegexExpr::Union(Box::new(a), Box::new(b))
    }

    pub fn interleave(a: RegexExpr, b: RegexExpr) -> RegexExpr {
        RegexExpr::Interleave(Box::new(a), Box::new(b))
    }

    /// `N` with `vcw <= log2 N`.
    pub fn bound_power(&self) -> BigUint {
        match self {
            RegexExpr::RepInf(w) => BigUint::from(w.len()),
            RegexExpr::Prefix(w, r) | RegexExpr::Star(w, r) => r.bound_power() * w.len() * 2u32,
            RegexExpr::Union(a, b) => a.bound_power() * b.bound_power(),
            RegexExpr::Interleave(a, b) => {
                let m = a.bound_power().max(b.bound_power());
                m.pow(4) << INTERLEAVE_CONSTANT
            }
        }
    }

    /// The bound as a real number, `log2 N`.
    pub fn bound_log2(&self) -> f64 {
        let n = self.bound_power();
        let bits = n.bits();
        if bits <= 52 {
            return (n.to_string().parse::<f64>().expect("integer")).log2();
        }
        let shift = bits - 52;
        let top: u64 = (&n >> shift).to_string().parse().expect("fits");
        (top as f64).log2() + shift as f64
    }

    fn needs_parens(&self) -> bool {
        matches!(self, RegexExpr::Union(..) | RegexExpr::Interleave(..))
    }
}

/// `⌈log2 N⌉` of the calculus.
pub fn vcw_bound(e: &RegexExpr) -> u64 {
    let n = e.bound_power();
    (n - 1u32).bits()
}

fn group(w: &str) -> String {
    if w.len() == 1 {
        w.to_string()
    } else {
        format!("({w})")
    }
}

impl fmt::Display for RegexExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tail = |f: &mut fmt::Formatter<'_>, r: &RegexExpr| {
            if r.needs_parens() {
                write!(f, "({r})")
            } else {
                write!(f, "{r}")
            }
        };
        match self {
            RegexExpr::RepInf(w) => write!(f, "{}^∞", group(w)),
            RegexExpr::Prefix(w, r) => {
                write!(f, "{w}")?;
                if let RegexExpr::RepInf(_) = **r {
                    // keep "1" + "0^∞" from reading as "(10)^∞"
                    return write!(f, "{r}");
                }
                tail(f, r)
            }
            RegexExpr::Star(w, r) => {
                write!(f, "{}*", group(w))?;
                tail(f, r)
            }
            RegexExpr::Union(a, b) => write!(f, "{a} ∪ {b}"),
            RegexExpr::Interleave(a, b) => {
                let side = |f: &mut fmt::Formatter<'_>, r: &RegexExpr| {
                    if matches!(r, RegexExpr::Union(..)) {
                        write!(f, "({r})")
                    } else {
                        write!(f, "{r}")
                    }
                };
                side(f, a)?;
                write!(f, " ⊕ ")?;
                side(f, b)
            }
        }
    }
}

/// Grammar, loosest first: `A ∪ B` (also `|`), `A ⊕ B` (also `&`), then a
/// sequence of atoms ending in an infinite tail. An atom is a bit or a
/// parenthesised bit string, optionally followed by `*` or `^∞` (also
/// `^inf`); postfix operators bind to the single preceding atom.
impl FromStr for RegexExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<RegexExpr> {
        let s = s.replace("^inf", "^∞");
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { chars, pos: 0 };
        let e = p.union()?;
        if p.pos != p.chars.len() {
            return Err(Error::Parse(format!(
                "unexpected {:?} at {}",
                p.chars[p.pos], p.pos
            )));
        }
        Ok(e)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

enum Atom {
    Plain(String),
    Star(String),
    Inf(String),
    Group(RegexExpr),
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn union(&mut self) -> Result<RegexExpr> {
        let mut e = self.interleave()?;
        while matches!(self.peek(), Some('∪' | '|')) {
            self.pos += 1;
            e = RegexExpr::union(e, self.interleave()?);
        }
        Ok(e)
    }

    fn interleave(&mut self) -> Result<RegexExpr> {
        let mut e = self.sequence()?;
        while matches!(self.peek(), Some('⊕' | '&')) {
            self.pos += 1;
            e = RegexExpr::interleave(e, self.sequence()?);
        }
        Ok(e)
    }

    fn sequence(&mut self) -> Result<RegexExpr> {
        let mut atoms = Vec::new();
        while let Some(c) = self.peek() {
            let bits = match c {
                '0' | '1' => {
                    self.pos += 1;
                    c.to_string()
                }
                '(' => {
                    let start = self.pos + 1;
                    let run = self.chars[start..]
                        .iter()
                        .take_while(|c| matches!(c, '0' | '1'))
                        .count();
                    if run == 0 || self.chars.get(start + run) != Some(&')') {
                        self.pos = start;
                        let inner = self.union()?;
                        if self.peek() != Some(')') {
                            return Err(Error::Parse("missing ')'".into()));
                        }
                        self.pos += 1;
                        atoms.push(Atom::Group(inner));
                        continue;
                    }
                    self.pos = start + run + 1;
                    self.chars[start..start + run].iter().collect()
                }
                _ => break,
            };
            let atom = match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    Atom::Star(bits)
                }
                Some('^') if self.chars.get(self.pos + 1) == Some(&'∞') => {
                    self.pos += 2;
                    Atom::Inf(bits)
                }
                _ => Atom::Plain(bits),
            };
            // a bare run of bits is one prefix word
            match (atoms.last_mut(), atom) {
                (Some(Atom::Plain(prev)), Atom::Plain(w)) => prev.push_str(&w),
                (_, atom) => atoms.push(atom),
            }
        }
        let mut iter = atoms.into_iter().rev();
        let mut e = match iter.next() {
            Some(Atom::Inf(w)) => RegexExpr::RepInf(w),
            Some(Atom::Group(g)) => g,
            _ => return Err(Error::Parse("a sequence must end in w^∞ or a group".into())),
        };
        for atom in iter {
            e = match atom {
                Atom::Plain(w) => RegexExpr::Prefix(w, Box::new(e)),
                Atom::Star(w) => RegexExpr::Star(w, Box::new(e)),
                _ => {
                    return Err(Error::Parse(
                        "infinite parts may only end a sequence".into(),
                    ))
                }
            };
        }
        Ok(e)
    }
}

/// All sequences of the language cut to length `h`; `None` for
/// interleavings. Star repetition counts run up to `h / |w|`.
pub fn truncated_language(e: &RegexExpr, h: usize) -> Option<Vec<Vec<u8>>> {
    let bits = |w: &str| w.bytes().map(|b| b - b'0').collect::<Vec<u8>>();
    let mut out: Vec<Vec<u8>> = match e {
        RegexExpr::RepInf(w) => vec![bits(w).into_iter().cycle().take(h).collect()],
        RegexExpr::Prefix(w, r) => {
            let head = bits(w);
            truncated_language(r, h)?
                .into_iter()
                .map(|t| head.iter().chain(&t).copied().take(h).collect())
                .collect()
        }
        RegexExpr::Star(w, r) => {
            let head = bits(w);
            let tails = truncated_language(r, h)?;
            (0..=h / head.len())
                .flat_map(|j| {
                    let pre: Vec<u8> = head.iter().copied().cycle().take(j * head.len()).collect();
                    tails
                        .iter()
                        .map(move |t| pre.iter().chain(t).copied().take(h).collect::<Vec<u8>>())
                        .collect::<Vec<_>>()
                })
                .collect()
        }
        RegexExpr::Union(a, b) => {
            let mut v = truncated_language(a, h)?;
            v.extend(truncated_language(b, h)?);
            v
        }
        RegexExpr::Interleave(..) => return None,
    };
    out.sort();
    out.dedup();
    Some(out)
}

/// Largest `d` such that some `d` distinct sequences realise all `2^d`
/// label patterns within columns `[tail, h)`, searching up to `d_max`.
pub fn brute_force_vcw(seqs: &[Vec<u8>], tail: usize, h: usize, d_max: usize) -> usize {
    fn shatters(seqs: &[Vec<u8>], pick: &[usize], tail: usize, h: usize) -> bool {
        let mut seen = vec![false; 1 << pick.len()];
        for k in tail..h {
            let pat = pick
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, &s)| acc | ((seqs[s][k] as usize) << i));
            seen[pat] = true;
        }
        seen.iter().all(|&b| b)
    }
    fn search(
        seqs: &[Vec<u8>],
        pick: &mut Vec<usize>,
        start: usize,
        d: usize,
        tail: usize,
        h: usize,
    ) -> bool {
        if pick.len() == d {
            return shatters(seqs, pick, tail, h);
        }
        for i in start..seqs.len() {
            pick.push(i);
            if search(seqs, pick, i + 1, d, tail, h) {
                return true;
            }
            pick.pop();
        }
        false
    }
    let mut best = 0;
    for d in 1..=d_max {
        if (1usize << d) > h - tail || !search(seqs, &mut Vec::new(), 0, d, tail, h) {
            break;
        }
        best = d;
    }
    best
}

/// `18 p²` for `p = 2^q`.
pub fn doubling_vc_bound(p: u64) -> Result<u64> {
    if !p.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "p = {p} is not a power of two"
        )));
    }
    Ok(18 * p * p)
}

/// The `d` smallest primes greater than `m`.
pub fn primes_above(m: u64, d: usize) -> Vec<u64> {
    let mut limit = (m as usize + 16) * 2;
    loop {
        let mut composite = vec![false; limit + 1];
        let mut out = Vec::with_capacity(d);
        for i in 2..=limit {
            if composite[i] {
                continue;
            }
            if i as u64 > m {
                out.push(i as u64);
                if out.len() == d {
                    return out;
                }
            }
            (i * i..=limit).step_by(i).for_each(|j| composite[j] = true);
        }
        limit *= 2;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShatterWitness {
    pub d: usize,
    pub m: usize,
    pub primes: Vec<u64>,
    pub points: Vec<Rat>,
    /// Labeling bits (point order) to the iterate index realising it.
    pub table: BTreeMap<String, u64>,
}

impl ShatterWitness {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Rechecks every labeling by iterating the map exactly `k` times.
    pub fn verify(&self, m: &MapFamily) -> Result<bool> {
        if self.table.len() != 1 << self.d {
            return Ok(false);
        }
        let half = Rat::half();
        for (sigma, &k) in &self.table {
            for (bit, x) in sigma.bytes().zip(&self.points) {
                let mut y = x.clone();
                for _ in 0..k {
                    y = m.eval_exact(&y)?;
                }
                if (y >= half) != (bit == b'1') {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Least `k >= 2` with `k ≡ 0 (mod p_j)` where `σ_j = 0` and `k ≡ 1` where
/// `σ_j = 1`.
pub fn crt_exponent(primes: &[u64], sigma: &[bool]) -> u64 {
    let (mut p0, mut p1) = (1i64, 1i64);
    for (&p, &s) in primes.iter().zip(sigma) {
        if s {
            p1 *= p as i64
        } else {
            p0 *= p as i64
        }
    }
    let total = p0 * p1;
    // k = p0 * t with p0 * t ≡ 1 (mod p1)
    let inv = p0.extended_gcd(&p1).x.mod_floor(&p1);
    let mut k = (p0 * inv).mod_floor(&total);
    if p1 == 1 {
        k = 0;
    }
    while k < 2 {
        k += total;
    }
    k as u64
}

/// A point of minimal period `p` with `x < 1/2 <= f(x)`, with its orbit.
fn left_cycle_point(m: &MapFamily, p: usize) -> Result<Vec<Rat>> {
    let f = m.to_pl()?;
    let fp = f.iterate(p)?;
    let half = Rat::half();
    let mut best: Option<Vec<Rat>> = None;
    for x in fixed_points_of(&fp)? {
        if x >= half {
            continue;
        }
        let mut orbit = vec![x.clone()];
        for _ in 1..p {
            orbit.push(f.eval(orbit.last().expect("nonempty"))?);
        }
        if orbit[1] < half || orbit[1..].contains(&x) {
            continue;
        }
        if best.as_ref().is_none_or(|b| x < b[0]) {
            best = Some(orbit);
        }
    }
    best.ok_or_else(|| Error::RootSearch(format!("no {p}-cycle point with x < 1/2 <= f(x)")))
}

/// Shatters `d` points of an exact map at threshold `1/2`, one point on a
/// `p_j`-cycle per prime above the odd base period `m_period`. Labels are
/// read off orbit positions `k mod p_j`.
pub fn shatter(m: &MapFamily, m_period: usize, d: usize) -> Result<ShatterWitness> {
    if !m.is_exact() {
        return Err(Error::InvalidArgument("shatter needs an exact map".into()));
    }
    if d == 0 || d > 3 {
        return Err(Error::OutOfRange(format!("d must be in 1..=3, got {d}")));
    }
    if m_period < 3 || m_period % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "base period must be odd and >= 3, got {m_period}"
        )));
    }
    if !find_cycles(m, m_period)?
        .iter()
        .any(|c| c.period == m_period)
    {
        return Err(Error::RootSearch(format!("{m} has no {m_period}-cycle")));
    }
    let primes = primes_above(m_period as u64, d);
    let orbits: Vec<Vec<Rat>> = primes
        .iter()
        .map(|&p| left_cycle_point(m, p as usize))
        .collect::<Result<_>>()?;
    let half = Rat::half();
    let rows: Vec<Result<(String, u64)>> = (0..1usize << d)
        .into_par_iter()
        .map(|mask| {
            let sigma: Vec<bool> = (0..d).map(|j| mask >> (d - 1 - j) & 1 == 1).collect();
            let k = crt_exponent(&primes, &sigma);
            for (j, orbit) in orbits.iter().enumerate() {
                let y = &orbit[(k % primes[j]) as usize];
                if (y >= &half) != sigma[j] {
                    return Err(Error::Construction(format!(
                        "labeling {mask:b} fails at point {j}"
                    )));
                }
            }
            let key = sigma.iter().map(|&b| if b { '1' } else { '0' }).collect();
            Ok((key, k))
        })
        .collect();
    let mut table = BTreeMap::new();
    for r in rows {
        let (key, k) = r?;
        table.insert(key, k);
    }
    Ok(ShatterWitness {
        d,
        m: m_period,
        primes,
        points: orbits.into_iter().map(|o| o[0].clone()).collect(),
        table,
    })
}
