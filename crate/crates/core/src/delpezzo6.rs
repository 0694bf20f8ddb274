//! Integral points on the degree-6 del Pezzo surface, seen as the blow-up of
//! the product of two projective lines in `([0:1],[1:0])` and `([1:0],[0:1])`,
//! with boundary the strict transform of `s0 t0 = s1 t1`.
//!
//! Enumeration runs on the universal torsor: once `s` is fixed, the integral
//! partners `t` are arithmetic progressions indexed by pairs of divisors of
//! `s0` and `s1`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd_normalize, Int};
use crate::curves::{line_points, Family, Integrality};
use crate::error::{Error, Result};
use crate::metrics::{dp6_distance, dp6_height, P1Point, P1xP1Point, PointRow};
use crate::poly::MPoly;

fn is_center<T: Int>(y: &P1xP1Point<T>) -> bool {
    let (s0, s1) = y.s.coords();
    let (t0, t1) = y.t.coords();
    (s0.is_zero() && t1.is_zero()) || (s1.is_zero() && t0.is_zero())
}

/// The target point `([1:1],[1:1])` on the boundary.
pub fn target() -> P1xP1Point {
    P1xP1Point::from_coords(1, 1, 1, 1).unwrap()
}

/// `s0 t0 - s1 t1 = +-gcd(s0, t1) gcd(s1, t0)`.
pub fn is_integral<T: Int>(y: &P1xP1Point<T>) -> Result<bool> {
    Ok(cox_lift(y)?.is_unit())
}

/// Coordinates on the universal torsor: strict transforms and exceptional coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoxLift<T: Int = i64> {
    pub sp0: T,
    pub sp1: T,
    pub tp0: T,
    pub tp1: T,
    pub e1: T,
    pub e2: T,
}

impl<T: Int> CoxLift<T> {
    /// `s'0 t'0 - s'1 t'1`, a unit exactly on integral points.
    pub fn boundary_value(&self) -> T {
        self.sp0.clone() * self.tp0.clone() - self.sp1.clone() * self.tp1.clone()
    }

    pub fn is_unit(&self) -> bool {
        self.boundary_value().abs().is_one()
    }
}

pub fn cox_lift<T: Int>(y: &P1xP1Point<T>) -> Result<CoxLift<T>> {
    if is_center(y) {
        return Err(Error::BlownUpCenter);
    }
    let (s0, s1) = y.s.coords();
    let (t0, t1) = y.t.coords();
    let e1 = s0.gcd(&t1);
    let e2 = s1.gcd(&t0);
    Ok(CoxLift {
        sp0: s0 / e1.clone(),
        sp1: s1 / e2.clone(),
        tp0: t0 / e2.clone(),
        tp1: t1 / e1.clone(),
        e1,
        e2,
    })
}

/// The del Pezzo integrality predicate on ambient points `[[s0, s1], [t0, t1]]`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Dp6Integrality;

impl Integrality for Dp6Integrality {
    fn obstruction(&self, point: &[Vec<BigInt>]) -> BigInt {
        let y = match P1xP1Point::from_coords(
            point[0][0].clone(),
            point[0][1].clone(),
            point[1][0].clone(),
            point[1][1].clone(),
        ) {
            Ok(y) => y,
            Err(_) => return BigInt::zero(),
        };
        cox_lift(&y)
            .map(|l| l.boundary_value())
            .unwrap_or_else(|_| BigInt::zero())
    }
}

/// Which integral points an enumeration reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    All,
    /// Points with no zero coordinate.
    OffAxes,
    /// Points at distance strictly below `below` from `target`.
    Near {
        target: P1xP1Point,
        below: Ratio<i64>,
    },
}

impl Region {
    fn admits_factor(&self, s: &P1Point) -> bool {
        match self {
            Region::All => true,
            Region::OffAxes => !s.a().is_zero() && !s.b().is_zero(),
            Region::Near { target, below } => {
                crate::metrics::p1_distance(s, &target.s) < *below
                    || crate::metrics::p1_distance(s, &target.t) < *below
            }
        }
    }

    fn admits(&self, y: &P1xP1Point) -> bool {
        match self {
            Region::All => true,
            Region::OffAxes => self.admits_factor(&y.s) && self.admits_factor(&y.t),
            Region::Near { target, below } => dp6_distance(target, y) < *below,
        }
    }
}

/// Largest height handled by the machine-integer enumeration.
pub const MAX_BOUND: i64 = 1_000_000_000;

fn isqrt(n: i64) -> i64 {
    num_integer::Roots::sqrt(&n)
}

/// Primitive sign-normalized pairs with both entries at most `m` in absolute value.
fn primitive_pairs(m: i64) -> impl Iterator<Item = (i64, i64)> {
    let zero = (m >= 1).then_some((0, 1));
    zero.into_iter().chain(
        (1..=m).flat_map(move |a| (-m..=m).filter(move |b| a.gcd(b) == 1).map(move |b| (a, b))),
    )
}

fn divisors(n: i64) -> Vec<i64> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Integral partners `t` of a fixed `s` with `max|t| <= bound`.
fn partners(s: (i64, i64), bound: i64, mut emit: impl FnMut(P1Point)) {
    let (s0, s1) = s;
    if s0 == 0 || s1 == 0 {
        // every t except the blown-up center on this line
        let excluded = if s0 == 0 { (1, 0) } else { (0, 1) };
        for t in primitive_pairs(bound) {
            if t != excluded {
                emit(P1Point::new(t.0, t.1).unwrap());
            }
        }
        return;
    }
    for e1 in divisors(s0) {
        for e2 in divisors(s1) {
            let (a0, a1) = (s0 / e1, s1 / e2);
            // a0 x - a1 y = 1
            let g = a0.extended_gcd(&-a1);
            debug_assert_eq!(g.gcd.abs(), 1);
            let (x, y) = (g.x * g.gcd, g.y * g.gcd);
            let (base0, base1) = (x, y);
            // t = (e2 (base0 + k a1), e1 (base1 + k a0))
            let (lo0, hi0) = k_range(base0, a1, bound / e2);
            let (lo1, hi1) = k_range(base1, a0, bound / e1);
            let (lo, hi) = (lo0.max(lo1), hi0.min(hi1));
            for k in lo..=hi {
                let t0 = e2 * (base0 + k * a1);
                let t1 = e1 * (base1 + k * a0);
                if t0.gcd(&t1) == 1 {
                    let (n0, n1) = gcd_normalize(t0, t1).unwrap();
                    emit(P1Point::new(n0, n1).unwrap());
                }
            }
        }
    }
}

/// Integers `k` with `|base + k step| <= lim`, `step != 0`.
fn k_range(base: i64, step: i64, lim: i64) -> (i64, i64) {
    let (lo, hi) = (-lim - base, lim - base);
    if step > 0 {
        (
            Integer::div_ceil(&lo, &step),
            Integer::div_floor(&hi, &step),
        )
    } else {
        (
            Integer::div_ceil(&hi, &step),
            Integer::div_floor(&lo, &step),
        )
    }
}

/// Folds over every integral point of height at most `bound` in `region`,
/// splitting the work across the current rayon pool. `merge` must be
/// associative and commutative for the result to be independent of scheduling.
pub fn fold_integral<A, I, V, M>(bound: i64, region: &Region, init: I, visit: V, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    V: Fn(&mut A, &P1xP1Point, i64) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    assert!(
        (1..=MAX_BOUND).contains(&bound),
        "height bound out of range"
    );
    let root = isqrt(bound);
    let firsts: Vec<P1Point> = primitive_pairs(root)
        .map(|(a, b)| P1Point::new(a, b).unwrap())
        .filter(|s| region.admits_factor(s))
        .collect();
    firsts
        .par_iter()
        .fold(&init, |mut acc, s| {
            let hs = s.max_abs();
            partners(s.coords(), bound / hs, |t| {
                let ht = t.max_abs();
                let y = P1xP1Point::new(s.clone(), t.clone());
                if region.admits(&y) {
                    visit(&mut acc, &y, hs * ht);
                }
                if ht * ht > bound {
                    let swapped = P1xP1Point::new(t, s.clone());
                    if region.admits(&swapped) {
                        visit(&mut acc, &swapped, hs * ht);
                    }
                }
            });
            acc
        })
        .reduce(&init, &merge)
}

/// Canonical order: height, then coordinates.
pub fn canonical_sort(points: &mut [(i64, P1xP1Point)]) {
    points.sort_unstable();
}

/// All integral points of height at most `bound` in `region`, canonically sorted.
pub fn enumerate_region(bound: i64, region: &Region) -> Vec<(i64, P1xP1Point)> {
    let mut pts = fold_integral(
        bound,
        region,
        Vec::new,
        |acc, y, h| acc.push((h, y.clone())),
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    );
    canonical_sort(&mut pts);
    pts
}

/// Every integral point of height at most `bound`, away from the exceptional
/// curves. The coordinate lines alone carry on the order of `bound^2` points,
/// so this is meant for small bounds; use [`fold_integral`] with a region
/// otherwise.
pub fn enumerate_integral(bound: i64) -> Vec<P1xP1Point> {
    enumerate_region(bound, &Region::All)
        .into_iter()
        .map(|(_, y)| y)
        .collect()
}

/// Residue class of torsor coordinates modulo `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueClass {
    q: i64,
    a0: i64,
    a1: i64,
    b0: i64,
    b1: i64,
}

impl ResidueClass {
    pub fn new(q: i64, a0: i64, a1: i64, b0: i64, b1: i64) -> Result<Self> {
        if q < 2 {
            return Err(Error::Invalid(format!("modulus {q} must be at least 2")));
        }
        let r = |x: i64| x.mod_floor(&q);
        let (a0, a1, b0, b1) = (r(a0), r(a1), r(b0), r(b1));
        let v = (a0 * b0 - a1 * b1).mod_floor(&q);
        if v != 1 % q && v != q - 1 {
            return Err(Error::InvalidResidue);
        }
        Ok(ResidueClass { q, a0, a1, b0, b1 })
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn residues(&self) -> [i64; 4] {
        [self.a0, self.a1, self.b0, self.b1]
    }

    pub fn contains(&self, c: &[i64; 4]) -> bool {
        c.iter()
            .zip(self.residues())
            .all(|(x, r)| x.mod_floor(&self.q) == r)
    }
}

/// Integral torsor coordinates `(s0, s1, t0, t1)` with `s0 t0 - s1 t1 = +-1`
/// in a prescribed residue class.
pub fn strong_approx_lift(r: &ResidueClass) -> Result<[i64; 4]> {
    let q = r.q;
    let (s0, s1) = coprime_in_class(q, r.a0, r.a1);
    for eps in [1i64, -1] {
        // s0 r0 - s1 r1 = eps
        let g = s0.extended_gcd(&s1);
        let (r0, r1) = (g.x * g.gcd * eps, -g.y * g.gcd * eps);
        let base = r.b0 * r1 - r.b1 * r0;
        for sign in [1i64, -1] {
            let k = (sign * base).mod_floor(&q);
            let t0 = r0 - k * s1;
            let t1 = r1 - k * s0;
            let c = [s0, s1, t0, t1];
            if (s0 * t0 - s1 * t1).abs() == 1 && r.contains(&c) {
                return Ok(c);
            }
        }
    }
    Err(Error::InvalidResidue)
}

/// First coprime pair `(a0 + q j, a1 + q j')` over growing square windows.
fn coprime_in_class(q: i64, a0: i64, a1: i64) -> (i64, i64) {
    for radius in 0i64.. {
        for j in -radius..=radius {
            for jp in -radius..=radius {
                if j.abs().max(jp.abs()) != radius {
                    continue;
                }
                let (x, y) = (a0 + q * j, a1 + q * jp);
                if x.gcd(&y) == 1 {
                    return (x, y);
                }
            }
        }
    }
    unreachable!()
}

/// `N(W; B)`: integral points of height at most `bound` on a curve family.
///
/// Points off the coordinate axes come from the torsor enumeration; points
/// on the four axes are the roots of the curve equation restricted to each axis.
pub fn count_n(family: &Family, bound: i64) -> Result<u64> {
    let off = fold_integral(
        bound,
        &Region::OffAxes,
        || 0u64,
        |acc, y, _| {
            if family.contains(y) {
                *acc += 1;
            }
        },
        |a, b| a + b,
    );
    Ok(off + axis_points(family, bound)?.len() as u64)
}

/// Integral points of height at most `bound` on a curve family, with their
/// heights, canonically sorted. Lines are generated directly.
pub fn family_points(family: &Family, bound: i64) -> Result<Vec<(i64, P1xP1Point)>> {
    family.param()?;
    let mut pts: Vec<(i64, P1xP1Point)> = match family {
        Family::Line(which) => (-bound..=bound)
            .map(|n| line_points(*which, n))
            .map(|y| (dp6_height(&y), y))
            .filter(|(h, _)| *h <= bound)
            .collect(),
        _ => {
            let mut v = fold_integral(
                bound,
                &Region::OffAxes,
                Vec::new,
                |acc, y, h| {
                    if family.contains(y) {
                        acc.push((h, y.clone()));
                    }
                },
                |mut a, mut b| {
                    a.append(&mut b);
                    a
                },
            );
            v.extend(axis_points(family, bound)?.into_iter().map(|y| (dp6_height(&y), y)));
            v
        }
    };
    canonical_sort(&mut pts);
    Ok(pts)
}

/// Integral points of the family lying on a coordinate axis.
pub fn axis_points(family: &Family, bound: i64) -> Result<BTreeSet<P1xP1Point>> {
    let eq = family.equation();
    let c = |k: i64| MPoly::constant(2, BigRational::from_integer(k.into()));
    let (u, v) = (MPoly::var(2, 0), MPoly::var(2, 1));
    let mut out = BTreeSet::new();
    for (fixed_first, fixed) in [
        (true, (0, 1)),
        (true, (1, 0)),
        (false, (0, 1)),
        (false, (1, 0)),
    ] {
        let subs = if fixed_first {
            vec![c(fixed.0), c(fixed.1), u.clone(), v.clone()]
        } else {
            vec![u.clone(), v.clone(), c(fixed.0), c(fixed.1)]
        };
        let restricted = eq.substitute(&subs);
        if restricted.is_zero() {
            return Err(Error::Invalid(format!(
                "{family} contains a coordinate axis"
            )));
        }
        for (a, b) in binary_roots(&restricted) {
            let fixed_pt = P1Point::new(fixed.0, fixed.1)?;
            let Ok(moving) = P1Point::new(a, b) else {
                continue;
            };
            let y = if fixed_first {
                P1xP1Point::new(fixed_pt, moving)
            } else {
                P1xP1Point::new(moving, fixed_pt)
            };
            if is_center(&y) || dp6_height(&y) > bound {
                continue;
            }
            if is_integral(&y)? {
                out.insert(y);
            }
        }
    }
    Ok(out)
}

/// Rational roots `[a:b]` of a binary form that fit in machine integers.
fn binary_roots(f: &MPoly) -> Vec<(i64, i64)> {
    let p = f.dehomogenize_binary();
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) < f.total_degree().unwrap_or(0) as usize {
        out.push((1, 0));
    }
    for r in p.rational_roots() {
        if let (Some(a), Some(b)) = (r.numer().to_i64(), r.denom().to_i64()) {
            out.push((a, b));
        }
    }
    out
}

/// Point-stream rows near the target: integral points of height at most
/// `bound` with distance below one, canonically sorted.
pub fn figure_data(bound: i64, x: &P1xP1Point) -> Vec<PointRow> {
    let region = Region::Near {
        target: x.clone(),
        below: Ratio::one(),
    };
    enumerate_region(bound, &region)
        .into_iter()
        .map(|(h, y)| PointRow::new(&y, &h, &dp6_distance(x, &y)))
        .collect()
}

/// Whether the point lies on `s0 = s1` or `t0 = t1`.
pub fn on_lines<T: Int>(y: &P1xP1Point<T>) -> bool {
    y.s.a() == y.s.b() || y.t.a() == y.t.b()
}
