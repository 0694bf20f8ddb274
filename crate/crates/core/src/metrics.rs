//! Points, heights, distances and the empirical approximation-constant estimators.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd_normalize, gcd_normalize_vec, ln_ratio, Int};
use crate::error::{Error, Result};
use crate::poly::MPoly;

/// A rational point of the projective line, stored as a primitive pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct P1Point<T: Int = i64> {
    a: T,
    b: T,
}

impl<T: Int> P1Point<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        let (a, b) = gcd_normalize(a, b)?;
        Ok(P1Point { a, b })
    }

    pub fn a(&self) -> &T {
        &self.a
    }

    pub fn b(&self) -> &T {
        &self.b
    }

    pub fn coords(&self) -> (T, T) {
        (self.a.clone(), self.b.clone())
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> T {
        self.a.abs().max(self.b.abs())
    }

    pub fn to_big(&self) -> P1Point<BigInt> {
        P1Point {
            a: self.a.to_big(),
            b: self.b.to_big(),
        }
    }
}

impl<T: Int> std::fmt::Display for P1Point<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}:{}]", self.a, self.b)
    }
}

/// A rational point of the product of two projective lines.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct P1xP1Point<T: Int = i64> {
    pub s: P1Point<T>,
    pub t: P1Point<T>,
}

impl<T: Int> P1xP1Point<T> {
    pub fn new(s: P1Point<T>, t: P1Point<T>) -> Self {
        P1xP1Point { s, t }
    }

    pub fn from_coords(s0: T, s1: T, t0: T, t1: T) -> Result<Self> {
        Ok(P1xP1Point {
            s: P1Point::new(s0, s1)?,
            t: P1Point::new(t0, t1)?,
        })
    }

    pub fn to_big(&self) -> P1xP1Point<BigInt> {
        P1xP1Point {
            s: self.s.to_big(),
            t: self.t.to_big(),
        }
    }
}

impl<T: Int> std::fmt::Display for P1xP1Point<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.s, self.t)
    }
}

/// A rational point of projective n-space, stored as a primitive vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PnPoint<T: Int = i64> {
    coords: Vec<T>,
}

impl<T: Int> PnPoint<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        Ok(PnPoint {
            coords: gcd_normalize_vec(&coords)?,
        })
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }
}

/// Archimedean distance on the projective line:
/// `min(1, |ad - bc| / (max(|a|,|b|) max(|c|,|d|)))`.
///
/// The unclamped quotient can reach 2 for nearly antipodal points.
pub fn p1_distance<T: Int>(p: &P1Point<T>, q: &P1Point<T>) -> Ratio<T> {
    let cross = (p.a.clone() * q.b.clone() - p.b.clone() * q.a.clone()).abs();
    Ratio::new(cross, p.max_abs() * q.max_abs()).min(Ratio::one())
}

/// Distance on the product: the larger of the two factor distances.
pub fn dp6_distance<T: Int>(x: &P1xP1Point<T>, y: &P1xP1Point<T>) -> Ratio<T> {
    p1_distance(&x.s, &y.s).max(p1_distance(&x.t, &y.t))
}

/// Log anticanonical height on the integral model of the degree-6 del Pezzo surface.
pub fn dp6_height<T: Int>(y: &P1xP1Point<T>) -> T {
    y.s.max_abs() * y.t.max_abs()
}

/// Height attached to `O(d)` on projective space.
pub fn pn_height<T: Int>(p: &PnPoint<T>, d: u32) -> T {
    let m = p
        .coords
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(T::zero);
    num_traits::pow(m, d as usize)
}

/// Multiplicity data of a curve at the target point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Multiplicity {
    Single(u32),
    /// Per-branch multiplicities of a nodal curve.
    Branches(Vec<u32>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveKind {
    LogRational,
    ToroidalNonNodal,
    ToroidalNodal,
}

/// Degree, multiplicity and boundary splitting data of a curve through the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveMeta {
    degree: u32,
    mult: Multiplicity,
    kind: CurveKind,
    splitting_disc: Option<i64>,
    r_value: u8,
}

impl CurveMeta {
    /// `splitting_disc` is the discriminant of the field of definition of the
    /// boundary preimages, absent when they are rational.
    pub fn new(
        degree: u32,
        mult: Multiplicity,
        kind: CurveKind,
        splitting_disc: Option<i64>,
    ) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Invalid("degree must be positive".into()));
        }
        match &mult {
            Multiplicity::Single(0) => {
                return Err(Error::Invalid("multiplicity must be positive".into()))
            }
            Multiplicity::Branches(b) if b.is_empty() || b.contains(&0) => {
                return Err(Error::Invalid(
                    "branch multiplicities must be positive".into(),
                ))
            }
            _ => {}
        }
        let r_value = match splitting_disc {
            None => 1,
            Some(0) => {
                return Err(Error::Invalid(
                    "splitting discriminant must be nonzero".into(),
                ))
            }
            Some(d) if d > 0 => 2,
            Some(_) => 0,
        };
        Ok(CurveMeta {
            degree,
            mult,
            kind,
            splitting_disc,
            r_value,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn mult(&self) -> &Multiplicity {
        &self.mult
    }
    pub fn kind(&self) -> CurveKind {
        self.kind
    }
    pub fn splitting_disc(&self) -> Option<i64> {
        self.splitting_disc
    }
    pub fn r_value(&self) -> u8 {
        self.r_value
    }

    fn max_mult(&self) -> u32 {
        match &self.mult {
            Multiplicity::Single(m) => *m,
            Multiplicity::Branches(b) => *b.iter().max().unwrap(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PredictedAlpha {
    Finite(BigRational),
    Infinite,
}

impl PredictedAlpha {
    pub fn to_f64(&self) -> f64 {
        match self {
            PredictedAlpha::Finite(q) => q.to_f64().unwrap_or(f64::NAN),
            PredictedAlpha::Infinite => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for PredictedAlpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PredictedAlpha::Finite(q) => write!(f, "{q}"),
            PredictedAlpha::Infinite => write!(f, "inf"),
        }
    }
}

pub fn predicted_alpha(meta: &CurveMeta) -> PredictedAlpha {
    let deg = BigInt::from(meta.degree);
    match meta.kind {
        CurveKind::LogRational | CurveKind::ToroidalNonNodal => {
            PredictedAlpha::Finite(BigRational::new(deg, meta.max_mult().into()))
        }
        CurveKind::ToroidalNodal => {
            if meta.r_value == 0 {
                PredictedAlpha::Infinite
            } else {
                PredictedAlpha::Finite(BigRational::new(
                    deg,
                    (meta.r_value as u32 * meta.max_mult()).into(),
                ))
            }
        }
    }
}

/// Multiplicity of the plane curve `f = 0` at `point`.
pub fn multiplicity_at(f: &MPoly, point: &[BigRational; 2]) -> Result<u32> {
    if f.nvars() != 2 {
        return Err(Error::Invalid("expected a bivariate polynomial".into()));
    }
    if !f.eval(point).is_zero() {
        return Err(Error::NotOnCurve);
    }
    f.translate(point)
        .order()
        .ok_or(Error::Invalid("zero polynomial".into()))
}

/// One record of the height/distance frontier.
#[derive(Clone, Debug, PartialEq)]
pub struct FrontierRecord {
    pub height: BigInt,
    pub distance: BigRational,
    /// `log H / -log d`; `None` when `d >= 1`.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaEstimate {
    pub records: Vec<FrontierRecord>,
    pub ratio_sup: f64,
    pub frontier_slope: f64,
    pub point_count: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlphaConfig {
    /// Frontier records below this height are ignored by `ratio_sup`.
    pub noise_floor: u64,
}

impl Default for AlphaConfig {
    fn default() -> Self {
        AlphaConfig { noise_floor: 10 }
    }
}

pub fn ratio(height: &BigInt, distance: &BigRational) -> Option<f64> {
    if distance.is_zero() || *distance >= BigRational::one() {
        return None;
    }
    Some(height.ln_abs() / -ln_ratio(distance))
}

/// Streaming Pareto frontier of (height, distance) pairs.
///
/// Keeps exactly the pairs not dominated by another pair with smaller or
/// equal height and smaller or equal distance, so the result depends only on
/// the set of pairs fed in.
#[derive(Clone, Debug)]
pub struct Frontier<T: Int = i64> {
    front: BTreeMap<T, Ratio<T>>,
    count: u64,
    below_one: u64,
}

impl<T: Int> Default for Frontier<T> {
    fn default() -> Self {
        Frontier {
            front: BTreeMap::new(),
            count: 0,
            below_one: 0,
        }
    }
}

impl<T: Int> Frontier<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, height: T, distance: Ratio<T>) {
        self.count += 1;
        if distance < Ratio::one() {
            self.below_one += 1;
        }
        self.insert(height, distance);
    }

    fn insert(&mut self, height: T, distance: Ratio<T>) {
        if let Some((_, d)) = self.front.range(..=height.clone()).next_back() {
            if *d <= distance {
                return;
            }
        }
        let dominated: Vec<T> = self
            .front
            .range(height.clone()..)
            .take_while(|(_, d)| **d >= distance)
            .map(|(h, _)| h.clone())
            .collect();
        for h in dominated {
            self.front.remove(&h);
        }
        self.front.insert(height, distance);
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.count += other.count;
        self.below_one += other.below_one;
        for (h, d) in other.front {
            self.insert(h, d);
        }
        self
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn below_one(&self) -> u64 {
        self.below_one
    }

    pub fn records(&self) -> Vec<FrontierRecord> {
        self.front
            .iter()
            .map(|(h, d)| {
                let height = h.to_big();
                let distance = BigRational::new(d.numer().to_big(), d.denom().to_big());
                let ratio = ratio(&height, &distance);
                FrontierRecord {
                    height,
                    distance,
                    ratio,
                }
            })
            .collect()
    }

    pub fn finish(&self, config: &AlphaConfig) -> Result<AlphaEstimate> {
        if self.below_one < 3 {
            return Err(Error::TooFewPoints(self.below_one as usize));
        }
        let records = self.records();
        let usable: Vec<&FrontierRecord> = records.iter().filter(|r| r.ratio.is_some()).collect();
        let floor = BigInt::from(config.noise_floor);
        let above: Vec<&FrontierRecord> = usable
            .iter()
            .copied()
            .filter(|r| r.height >= floor)
            .collect();
        let pool = if above.is_empty() { &usable } else { &above };
        let ratio_sup = pool
            .iter()
            .filter_map(|r| r.ratio)
            .fold(f64::NEG_INFINITY, f64::max);
        let xs: Vec<f64> = usable.iter().map(|r| -ln_ratio(&r.distance)).collect();
        let ys: Vec<f64> = usable.iter().map(|r| r.height.ln_abs()).collect();
        let frontier_slope = least_squares_slope(&xs, &ys).unwrap_or(ratio_sup);
        Ok(AlphaEstimate {
            records,
            ratio_sup,
            frontier_slope,
            point_count: self.count,
        })
    }
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= f64::EPSILON * n {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

/// Frontier-based estimate of the approximation constant from (height, distance) samples.
///
/// Samples with distance zero (the target itself) are rejected.
pub fn estimate_alpha<T: Int>(
    samples: impl IntoIterator<Item = (T, Ratio<T>)>,
    config: &AlphaConfig,
) -> Result<AlphaEstimate> {
    let mut front = Frontier::new();
    for (h, d) in samples {
        if d.is_zero() {
            return Err(Error::Invalid("sample at distance zero".into()));
        }
        front.push(h, d);
    }
    front.finish(config)
}

/// Exponent of the Liouville product `d^e H`; the denominator must be 1 or 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiouvilleExponent {
    num: u32,
    den: u32,
}

impl LiouvilleExponent {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        let r = Ratio::new(num, den);
        if *r.numer() == 0 || *r.denom() > 2 {
            return Err(Error::Invalid(format!(
                "exponent {num}/{den} must be positive with denominator 1 or 2"
            )));
        }
        Ok(LiouvilleExponent {
            num: *r.numer(),
            den: *r.denom(),
        })
    }

    pub fn integer(e: u32) -> Result<Self> {
        Self::new(e, 1)
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `d^e H` when the denominator is 1, `(d^e H)^2` when it is 2.
    fn exact(&self, height: &BigInt, distance: &BigRational) -> BigRational {
        let d = num_traits::pow(distance.clone(), self.num as usize);
        let h = num_traits::pow(BigRational::from_integer(height.clone()), self.den as usize);
        d * h
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiouvilleWindow {
    /// The window is `[2^k, 2^(k+1))`.
    pub k: u64,
    /// Exact minimum of `d^e H`, squared when `squared` is set.
    pub exact: BigRational,
    pub squared: bool,
}

impl LiouvilleWindow {
    pub fn value(&self) -> f64 {
        let v = self.exact.to_f64().unwrap_or(f64::NAN);
        if self.squared {
            v.sqrt()
        } else {
            v
        }
    }
}

/// Streaming per-window minima of `d^e H`.
#[derive(Clone, Debug)]
pub struct LiouvilleAccumulator {
    exponent: LiouvilleExponent,
    minima: BTreeMap<u64, BigRational>,
}

impl LiouvilleAccumulator {
    pub fn new(exponent: LiouvilleExponent) -> Self {
        LiouvilleAccumulator {
            exponent,
            minima: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, height: &BigInt, distance: &BigRational) {
        debug_assert!(height.is_positive());
        let k = height.bits() - 1;
        let v = self.exponent.exact(height, distance);
        match self.minima.get_mut(&k) {
            Some(m) if *m <= v => {}
            Some(m) => *m = v,
            None => {
                self.minima.insert(k, v);
            }
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        for (k, v) in other.minima {
            match self.minima.get_mut(&k) {
                Some(m) if *m <= v => {}
                Some(m) => *m = v,
                None => {
                    self.minima.insert(k, v);
                }
            }
        }
        self
    }

    pub fn windows(&self) -> Vec<LiouvilleWindow> {
        let squared = self.exponent.den == 2;
        self.minima
            .iter()
            .map(|(&k, v)| LiouvilleWindow {
                k,
                exact: v.clone(),
                squared,
            })
            .collect()
    }
}

pub fn liouville_scan(
    points: &[(BigInt, BigRational)],
    exponent: LiouvilleExponent,
) -> Vec<LiouvilleWindow> {
    let mut acc = LiouvilleAccumulator::new(exponent);
    for (h, d) in points {
        acc.push(h, d);
    }
    acc.windows()
}

/// One row of the point-stream CSV schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRow {
    pub s0: String,
    pub s1: String,
    pub t0: String,
    pub t1: String,
    #[serde(rename = "H")]
    pub h: String,
    pub d_num: String,
    pub d_den: String,
    pub ratio: String,
}

impl PointRow {
    pub fn new<T: Int>(y: &P1xP1Point<T>, height: &T, distance: &Ratio<T>) -> Self {
        let hb = height.to_big();
        let db = BigRational::new(distance.numer().to_big(), distance.denom().to_big());
        let ratio = ratio(&hb, &db)
            .map(|r| format!("{r:.6}"))
            .unwrap_or_default();
        PointRow {
            s0: y.s.a().to_string(),
            s1: y.s.b().to_string(),
            t0: y.t.a().to_string(),
            t1: y.t.b().to_string(),
            h: hb.to_string(),
            d_num: distance.numer().to_string(),
            d_den: distance.denom().to_string(),
            ratio,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: i64, b: i64) -> P1Point {
        P1Point::new(a, b).unwrap()
    }

    fn pp(s0: i64, s1: i64, t0: i64, t1: i64) -> P1xP1Point {
        P1xP1Point::from_coords(s0, s1, t0, t1).unwrap()
    }

    #[test]
    fn distance_examples() {
        for n in [2i64, 5, -7, 100] {
            assert_eq!(p1_distance(&p(1, 0), &p(n, 1)), Ratio::new(1, n.abs()));
        }
        assert_eq!(p1_distance(&p(3, 4), &p(3, 4)), Ratio::zero());
        assert_eq!(p1_distance(&p(1, 1), &p(2, 1)), Ratio::new(1, 2));
        let x = pp(1, 1, 1, 1);
        assert_eq!(dp6_distance(&x, &pp(1, 1, 1, 0)), Ratio::one());
        assert_eq!(dp6_distance(&x, &pp(2, 1, 2, 3)), Ratio::new(1, 2));
        assert_eq!(dp6_distance(&x, &x), Ratio::zero());
    }

    #[test]
    fn height_examples() {
        assert_eq!(dp6_height(&pp(1, 1, 1, 0)), 1);
        assert_eq!(dp6_height(&pp(2, 3, 1, 2)), 6);
        assert_eq!(dp6_height(&pp(2, 1, 2, 3)), 6);
        assert_eq!(pn_height(&PnPoint::new(vec![1i64, 0, 0]).unwrap(), 1), 1);
        assert_eq!(pn_height(&PnPoint::new(vec![3i64, -5, 1]).unwrap(), 1), 5);
        assert_eq!(pn_height(&PnPoint::new(vec![3i64, -5, 1]).unwrap(), 2), 25);
        // normalization is forced
        assert_eq!(pp(-4, -6, 2, 4), pp(2, 3, 1, 2));
    }

    #[test]
    fn predicted_examples() {
        let q = |n: i64, d: i64| PredictedAlpha::Finite(BigRational::new(n.into(), d.into()));
        let m = CurveMeta::new(1, Multiplicity::Single(1), CurveKind::LogRational, None).unwrap();
        assert_eq!(predicted_alpha(&m), q(1, 1));
        let m = CurveMeta::new(
            4,
            Multiplicity::Branches(vec![1, 1]),
            CurveKind::ToroidalNodal,
            Some(2),
        )
        .unwrap();
        assert_eq!(m.r_value(), 2);
        assert_eq!(predicted_alpha(&m), q(2, 1));
        let m = CurveMeta::new(4, Multiplicity::Single(2), CurveKind::LogRational, None).unwrap();
        assert_eq!(predicted_alpha(&m), q(2, 1));
        let m = CurveMeta::new(
            4,
            Multiplicity::Branches(vec![1, 1]),
            CurveKind::ToroidalNodal,
            Some(-2),
        )
        .unwrap();
        assert_eq!(m.r_value(), 0);
        assert_eq!(predicted_alpha(&m), PredictedAlpha::Infinite);
    }

    #[test]
    fn estimator_on_synthetic_power_laws() {
        let exact: Vec<(i64, Ratio<i64>)> = (2..200).map(|h| (h, Ratio::new(1, h))).collect();
        let est = estimate_alpha(exact, &AlphaConfig::default()).unwrap();
        assert!((est.ratio_sup - 1.0).abs() < 1e-9);
        assert!((est.frontier_slope - 1.0).abs() < 1e-9);
        let sq: Vec<(i64, Ratio<i64>)> = (2..200).map(|k| (k * k, Ratio::new(1, k))).collect();
        let est = estimate_alpha(sq, &AlphaConfig::default()).unwrap();
        assert!((est.ratio_sup - 2.0).abs() < 1e-9);
        assert!((est.frontier_slope - 2.0).abs() < 1e-9);
    }

    #[test]
    fn estimator_needs_three_points() {
        let few = vec![
            (5i64, Ratio::new(1, 5)),
            (7, Ratio::new(1, 7)),
            (9, Ratio::one()),
        ];
        assert_eq!(
            estimate_alpha(few, &AlphaConfig::default()),
            Err(Error::TooFewPoints(2))
        );
    }

    #[test]
    fn frontier_drops_dominated_points() {
        let mut f = Frontier::<i64>::new();
        for (h, n, d) in [
            (10, 1, 5),
            (12, 1, 3),
            (8, 1, 4),
            (20, 1, 10),
            (20, 1, 20),
            (30, 1, 15),
        ] {
            f.push(h, Ratio::new(n, d));
        }
        let hs: Vec<i64> = f
            .records()
            .iter()
            .map(|r| r.height.to_i64().unwrap())
            .collect();
        assert_eq!(hs, vec![8, 10, 20]);
    }

    #[test]
    fn liouville_examples() {
        let pts = vec![(BigInt::from(6), BigRational::new(1.into(), 2.into()))];
        let w = liouville_scan(&pts, LiouvilleExponent::integer(1).unwrap());
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].k, 2);
        assert_eq!(w[0].exact, BigRational::from_integer(3.into()));
        let w = liouville_scan(&pts, LiouvilleExponent::integer(2).unwrap());
        assert_eq!(w[0].exact, BigRational::new(3.into(), 2.into()));
        // half-integer exponent: (d^(3/2) H)^2 = d^3 H^2 = 36/8
        let w = liouville_scan(&pts, LiouvilleExponent::new(3, 2).unwrap());
        assert!(w[0].squared);
        assert_eq!(w[0].exact, BigRational::new(9.into(), 2.into()));
        assert!(LiouvilleExponent::new(1, 3).is_err());
    }

    #[test]
    fn multiplicities() {
        // affine C_{1,1} with s = (1, x), t = (1, y): (1 - x y) + (1 - x)(1 - y)
        let c = MPoly::from_terms(2, &[(2, &[0, 0]), (-1, &[1, 0]), (-1, &[0, 1])]);
        let one = BigRational::one();
        assert_eq!(multiplicity_at(&c, &[one.clone(), one.clone()]), Ok(1));
        assert_eq!(
            multiplicity_at(&c, &[one.clone(), BigRational::zero()]),
            Err(Error::NotOnCurve)
        );
    }
}
