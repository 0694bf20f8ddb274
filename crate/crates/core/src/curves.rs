//! Rational curves on the integral models: parametrizations, log
//! classification against a boundary, integral reparametrization and
//! unit-orbit generation on nodal toroidal curves.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    gcd_normalize_vec, is_square, pell_fundamental, prime_divisors, squarefree_kernel, Int,
    PellSolution,
};
use crate::delpezzo6::is_integral;
use crate::error::{Error, Result};
use crate::metrics::{CurveKind, CurveMeta, Multiplicity, P1Point, P1xP1Point};
use crate::poly::{MPoly, UPoly};

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// A map from the projective line into a product of projective spaces,
/// one tuple of binary forms in `(u, v)` per factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamCurve {
    factors: Vec<Vec<MPoly>>,
}

impl ParamCurve {
    /// Forms in a factor must be homogeneous of one degree, have integer
    /// coefficients and no common factor.
    pub fn new(factors: Vec<Vec<MPoly>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Invalid(
                "a parametrization needs at least one factor".into(),
            ));
        }
        let factors = factors
            .into_iter()
            .map(normalize_factor)
            .collect::<Result<Vec<_>>>()?;
        Ok(ParamCurve { factors })
    }

    /// Curve in the product of two projective lines.
    pub fn p1xp1(s: [MPoly; 2], t: [MPoly; 2]) -> Result<Self> {
        Self::new(vec![s.to_vec(), t.to_vec()])
    }

    pub fn factors(&self) -> &[Vec<MPoly>] {
        &self.factors
    }

    /// Degree of each factor map.
    pub fn degrees(&self) -> Vec<u32> {
        self.factors.iter().map(|f| factor_degree(f)).collect()
    }

    /// Ambient point (one primitive vector per factor) at an integer parameter.
    pub fn eval(&self, u: &BigInt, v: &BigInt) -> Result<Vec<Vec<BigInt>>> {
        self.factors
            .iter()
            .map(|forms| {
                let vals: Vec<BigInt> = forms.iter().map(|f| eval_form(f, u, v)).collect();
                gcd_normalize_vec(&vals)
            })
            .collect()
    }

    pub fn eval_p1xp1(&self, u: &BigInt, v: &BigInt) -> Result<P1xP1Point<BigInt>> {
        let pt = self.eval(u, v)?;
        to_p1xp1(&pt)
    }

    /// Parameters `[u:v]` (primitive) mapping to the given ambient point.
    pub fn preimages_of(&self, point: &[Vec<BigInt>]) -> Vec<(BigInt, BigInt)> {
        let mut minor = None;
        'outer: for (forms, p) in self.factors.iter().zip(point) {
            for i in 0..forms.len() {
                for j in i + 1..forms.len() {
                    let m = &forms[i].scale(&rat(p[j].clone())) - &forms[j].scale(&rat(p[i].clone()));
                    if !m.is_zero() {
                        minor = Some(m);
                        break 'outer;
                    }
                }
            }
        }
        let mut candidates = vec![(BigInt::one(), BigInt::zero())];
        if let Some(m) = minor {
            candidates.extend(
                m.dehomogenize_binary()
                    .rational_roots()
                    .into_iter()
                    .map(|r| (r.numer().clone(), r.denom().clone())),
            );
        }
        candidates
            .into_iter()
            .filter(|(u, v)| self.eval(u, v).is_ok_and(|img| img.as_slice() == point))
            .collect()
    }

    /// Pulls a polynomial in the ambient coordinates back to a binary form.
    pub fn pullback(&self, f: &MPoly) -> MPoly {
        let subs: Vec<MPoly> = self.factors.iter().flatten().cloned().collect();
        f.substitute(&subs)
    }
}

fn factor_degree(forms: &[MPoly]) -> u32 {
    forms
        .iter()
        .filter_map(|f| f.total_degree())
        .max()
        .unwrap_or(0)
}

fn eval_form(f: &MPoly, u: &BigInt, v: &BigInt) -> BigInt {
    f.eval_int(&[u.clone(), v.clone()]).to_integer()
}

fn normalize_factor(forms: Vec<MPoly>) -> Result<Vec<MPoly>> {
    if forms.len() < 2 || forms.iter().any(|f| f.nvars() != 2) {
        return Err(Error::Invalid(
            "each factor needs at least two binary forms".into(),
        ));
    }
    if forms.iter().all(|f| f.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let deg = factor_degree(&forms);
    for f in &forms {
        if !f.is_zero() && (!f.is_homogeneous() || f.total_degree() != Some(deg)) {
            return Err(Error::Invalid(
                "forms of a factor must be homogeneous of a common degree".into(),
            ));
        }
        if !f.has_integer_coefficients() {
            return Err(Error::Invalid(
                "forms must have integer coefficients".into(),
            ));
        }
    }
    let dehom: Vec<UPoly> = forms
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| f.dehomogenize_binary())
        .collect();
    let g = dehom.iter().fold(UPoly::zero(), |g, p| g.gcd(p));
    let at_infinity = dehom.iter().all(|p| p.degree() != Some(deg as usize));
    if g.degree() != Some(0) || at_infinity {
        return Err(Error::Invalid(
            "forms of a factor share a common factor".into(),
        ));
    }
    Ok(forms)
}

fn to_p1xp1(pt: &[Vec<BigInt>]) -> Result<P1xP1Point<BigInt>> {
    if pt.len() != 2 || pt.iter().any(|f| f.len() != 2) {
        return Err(Error::Invalid(
            "not a point of a product of two projective lines".into(),
        ));
    }
    P1xP1Point::from_coords(
        pt[0][0].clone(),
        pt[0][1].clone(),
        pt[1][0].clone(),
        pt[1][1].clone(),
    )
}

/// Pair of binary forms `[f0 : f1]` in `(u, v)` from univariate polynomials in `u/v`,
/// with common factors removed and primitive integer coefficients.
fn binary_pair(f0: &UPoly, f1: &UPoly) -> [MPoly; 2] {
    let g = f0.gcd(f1);
    let (a, b) = (f0.divrem(&g).0, f1.divrem(&g).0);
    let deg = a.degree().unwrap_or(0).max(b.degree().unwrap_or(0)) as u32;
    let joint: Vec<BigRational> = a.coeffs().iter().chain(b.coeffs()).cloned().collect();
    let den = joint.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let num = joint.iter().fold(BigInt::zero(), |g, c| {
        g.gcd(&(c * rat(den.clone())).to_integer())
    });
    let scale = BigRational::new(den, num);
    [
        MPoly::homogenize_binary(&a.scale(&scale), deg),
        MPoly::homogenize_binary(&b.scale(&scale), deg),
    ]
}

/// Boundary divisor on the ambient space, together with blown-up centers
/// lying on it. Parameter values that land on a center do not meet the
/// strict transform of the boundary and are not counted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryModel {
    equation: MPoly,
    centers: Vec<Vec<Vec<BigInt>>>,
}

impl BoundaryModel {
    pub fn new(equation: MPoly, centers: Vec<Vec<Vec<BigInt>>>) -> Result<Self> {
        let centers = centers
            .into_iter()
            .map(|c| {
                c.iter()
                    .map(|f| gcd_normalize_vec(f))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BoundaryModel { equation, centers })
    }

    /// Boundary of the degree-6 del Pezzo model: the curve `s0 t0 = s1 t1`
    /// with the two blown-up centers on it.
    pub fn dp6() -> Self {
        let b = |x: i64| BigInt::from(x);
        BoundaryModel {
            equation: MPoly::from_terms(4, &[(1, &[1, 0, 1, 0]), (-1, &[0, 1, 0, 1])]),
            centers: vec![
                vec![vec![b(0), b(1)], vec![b(1), b(0)]],
                vec![vec![b(1), b(0)], vec![b(0), b(1)]],
            ],
        }
    }

    /// Hyperplane `x_i = 0` in projective space of dimension `n`.
    pub fn hyperplane(n: usize, i: usize) -> Self {
        BoundaryModel {
            equation: MPoly::var(n + 1, i),
            centers: vec![],
        }
    }

    pub fn equation(&self) -> &MPoly {
        &self.equation
    }

    fn is_center(&self, pt: &[Vec<BigInt>]) -> bool {
        self.centers.iter().any(|c| c.as_slice() == pt)
    }
}

/// Decides integrality of ambient points on an integral model.
pub trait Integrality {
    /// A value that is `+-1` exactly when the point is integral; primes
    /// dividing it are places where the point meets the boundary.
    fn obstruction(&self, point: &[Vec<BigInt>]) -> BigInt;

    fn is_integral_point(&self, point: &[Vec<BigInt>]) -> bool {
        self.obstruction(point).abs().is_one()
    }
}

/// Complement of the hyperplane `x_i = 0` in projective space.
#[derive(Clone, Copy, Debug)]
pub struct HyperplaneComplement {
    pub coord: usize,
}

impl Integrality for HyperplaneComplement {
    fn obstruction(&self, point: &[Vec<BigInt>]) -> BigInt {
        point[0][self.coord].clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogKind {
    LogRational,
    Toroidal,
    HigherLogGenus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveClass {
    pub kind: LogKind,
    /// Number of geometric points over the boundary.
    pub boundary_preimage_degree: u32,
    /// Both boundary preimages map to one point (toroidal curves only).
    pub nodal: bool,
    /// Squarefree kernel of the discriminant when the two preimages are conjugate.
    pub splitting_disc: Option<i64>,
}

/// Boundary preimages on the parameter line that survive the center exclusion.
#[derive(Clone, Debug)]
struct Preimages {
    rational: Vec<(BigInt, BigInt)>,
    images: Vec<Vec<Vec<BigInt>>>,
    quadratic: Option<QuadraticPreimage>,
    other_degree: u32,
}

#[derive(Clone, Debug)]
struct QuadraticPreimage {
    disc: BigInt,
    image: Option<Vec<Vec<BigInt>>>,
}

fn boundary_preimages(curve: &ParamCurve, boundary: &BoundaryModel) -> Result<Preimages> {
    let g = curve.pullback(&boundary.equation);
    if g.is_zero() {
        return Err(Error::BoundaryContainsCurve);
    }
    let total = g.total_degree().unwrap() as usize;
    let p = g.dehomogenize_binary();
    let mut candidates: Vec<(BigInt, BigInt)> = Vec::new();
    if p.degree().unwrap_or(0) < total {
        candidates.push((BigInt::one(), BigInt::zero()));
    }
    let sf = p.squarefree_part();
    let roots = sf.rational_roots();
    let mut rest = sf.clone();
    for r in &roots {
        rest = rest
            .divrem(&UPoly::new(vec![-r.clone(), BigRational::one()]))
            .0;
        candidates.push((r.numer().clone(), r.denom().clone()));
    }
    let mut out = Preimages {
        rational: vec![],
        images: vec![],
        quadratic: None,
        other_degree: 0,
    };
    for (u, v) in candidates {
        let img = curve.eval(&u, &v)?;
        if !boundary.is_center(&img) {
            out.rational.push((u, v));
            out.images.push(img);
        }
    }
    match rest.degree().unwrap_or(0) {
        0 => {}
        2 => {
            let q = rest.monic();
            let (c0, c1) = (q.coeff(0), q.coeff(1));
            let disc = &c1 * &c1 - rat(4) * c0;
            let disc = squarefree_kernel(&(disc.numer() * disc.denom()));
            let image = conjugate_image(curve, &q)?;
            if !image.as_ref().is_some_and(|img| boundary.is_center(img)) {
                out.quadratic = Some(QuadraticPreimage { disc, image });
            }
        }
        d => out.other_degree = d as u32,
    }
    Ok(out)
}

/// Image of a root of the irreducible monic quadratic `q`, if it is rational.
///
/// Each form reduces modulo `q` to `c + d * theta`; the image is rational iff
/// all those vectors are proportional.
fn conjugate_image(curve: &ParamCurve, q: &UPoly) -> Result<Option<Vec<Vec<BigInt>>>> {
    let mut out = Vec::new();
    for forms in curve.factors() {
        let reduced: Vec<(BigRational, BigRational)> = forms
            .iter()
            .map(|f| {
                let r = f.dehomogenize_binary().divrem(q).1;
                (r.coeff(0), r.coeff(1))
            })
            .collect();
        let Some(pivot) = reduced
            .iter()
            .find(|(c, d)| !c.is_zero() || !d.is_zero())
            .cloned()
        else {
            return Err(Error::ZeroVector);
        };
        if reduced
            .iter()
            .any(|(c, d)| &pivot.0 * d - &pivot.1 * c != BigRational::zero())
        {
            return Ok(None);
        }
        let coord: Vec<BigRational> = reduced
            .iter()
            .map(|(c, d)| {
                if !pivot.0.is_zero() {
                    c / &pivot.0
                } else {
                    d / &pivot.1
                }
            })
            .collect();
        let den = coord.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = coord
            .iter()
            .map(|c| (c * rat(den.clone())).to_integer())
            .collect();
        out.push(gcd_normalize_vec(&ints)?);
    }
    Ok(Some(out))
}

/// Log classification of a parametrized curve against a boundary.
pub fn classify_log_curve(curve: &ParamCurve, boundary: &BoundaryModel) -> Result<CurveClass> {
    let pre = boundary_preimages(curve, boundary)?;
    let quad = pre.quadratic.as_ref().map_or(0, |_| 2);
    let count = pre.rational.len() as u32 + quad + pre.other_degree;
    let kind = match count {
        0 | 1 => LogKind::LogRational,
        2 => LogKind::Toroidal,
        _ => LogKind::HigherLogGenus,
    };
    let (nodal, splitting_disc) = match (kind, &pre.quadratic) {
        (LogKind::Toroidal, Some(q)) => {
            let disc = q
                .disc
                .to_i64()
                .ok_or_else(|| Error::Invalid("discriminant too large".into()))?;
            (q.image.is_some(), Some(disc))
        }
        (LogKind::Toroidal, None) => (pre.images[0] == pre.images[1], None),
        _ => (false, None),
    };
    Ok(CurveClass {
        kind,
        boundary_preimage_degree: count,
        nodal,
        splitting_disc,
    })
}

/// Whether the integral points on the curve are infinite, over the rationals.
pub fn has_infinitely_many(cls: &CurveClass, has_regular_integral_point: bool) -> bool {
    match cls.kind {
        LogKind::LogRational => has_regular_integral_point,
        LogKind::Toroidal => {
            has_regular_integral_point && cls.splitting_disc.is_some_and(|d| d > 0)
        }
        LogKind::HigherLogGenus => false,
    }
}

/// Which of the two lines through the target point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Line {
    /// `s0 = s1`
    L1,
    /// `t0 = t1`
    L2,
}

/// The `n`-th integral point on a line: `([1:1], [n+1:n])` or its swap.
pub fn line_points<T: Int>(which: Line, n: T) -> P1xP1Point<T> {
    let one = P1Point::new(T::one(), T::one()).unwrap();
    let moving = P1Point::new(n.clone() + T::one(), n).unwrap();
    match which {
        Line::L1 => P1xP1Point::new(one, moving),
        Line::L2 => P1xP1Point::new(moving, one),
    }
}

fn form(terms: &[(i64, [u32; 2])]) -> MPoly {
    let ts: Vec<(i64, &[u32])> = terms.iter().map(|(c, e)| (*c, e.as_slice())).collect();
    MPoly::from_terms(2, &ts)
}

pub fn line_param(which: Line) -> ParamCurve {
    let fixed = [form(&[(1, [0, 0])]), form(&[(1, [0, 0])])];
    let moving = [form(&[(1, [1, 0]), (1, [0, 1])]), form(&[(1, [1, 0])])];
    match which {
        Line::L1 => ParamCurve::p1xp1(fixed, moving).unwrap(),
        Line::L2 => ParamCurve::p1xp1(moving, fixed).unwrap(),
    }
}

fn check_params(a: i64, b: i64) -> Result<()> {
    if a == 0 || b == 0 || a.gcd(&b) != 1 {
        return Err(Error::DegenerateParameters { a, b });
    }
    Ok(())
}

/// `([u:v], [a v + b(u - v) : a u + b(u - v)])`, tangent to the boundary at the target.
pub fn conic_param(a: i64, b: i64) -> Result<ParamCurve> {
    check_params(a, b)?;
    let s = [form(&[(1, [1, 0])]), form(&[(1, [0, 1])])];
    let t = [
        form(&[(b, [1, 0]), (a - b, [0, 1])]),
        form(&[(a + b, [1, 0]), (-b, [0, 1])]),
    ];
    ParamCurve::p1xp1(s, t)
}

/// Rational parametrization of the nodal quartic by `p = (1 - w)/(1 - u)`:
/// `s = [P(aP - bQ) : bQ(Q - P)]`, `t = [Q(aP - bQ) : aP(Q - P)]`.
pub fn nodal_param(a: i64, b: i64) -> Result<ParamCurve> {
    check_params(a, b)?;
    if a == b {
        return Err(Error::ReducibleCurve { a, b });
    }
    let s = [
        form(&[(a, [2, 0]), (-b, [1, 1])]),
        form(&[(b, [0, 2]), (-b, [1, 1])]),
    ];
    let t = [
        form(&[(a, [1, 1]), (-b, [0, 2])]),
        form(&[(a, [1, 1]), (-a, [2, 0])]),
    ];
    ParamCurve::p1xp1(s, t)
}

/// Parametrization of the cuspidal quartic by the pencil of `(1,1)`-curves
/// through the cusp with the cuspidal tangent.
///
/// In the chart `s = (1, 1 + X)`, `t = (1, 1 + Y)` the pencil member with
/// parameter `mu` is `mu (bX - aY) + XY = 0`. It meets the quartic three
/// times at the cusp; the residual point is linear in `X`.
pub fn cuspidal_param(a: i64, b: i64) -> Result<ParamCurve> {
    check_params(a, b)?;
    if a + b == 0 {
        return Err(Error::ReducibleCurve { a, b });
    }
    // variables (X, Y, mu)
    let x = MPoly::var(3, 0);
    let y = MPoly::var(3, 1);
    let mu = MPoly::var(3, 2);
    let one = MPoly::constant(3, BigRational::one());
    let c = |k: i64| MPoly::constant(3, rat(k));
    let chart = [one.clone(), &one + &x, one.clone(), &one + &y];
    let f = Family::Cuspidal { a, b }.equation().substitute(&chart);
    let coeffs = f.coeffs_in(1);
    let ya_minus_x = &(&mu * &c(a)) - &x;
    let y_num = &(&mu * &c(b)) * &x;
    let mut g = MPoly::zero(3);
    for (k, ck) in coeffs.iter().enumerate() {
        let term = &(&y_num.pow(k as u32) * &ya_minus_x.pow(2 - k as u32)) * ck;
        g = &g + &term;
    }
    let residual = g
        .div_var_power(0, 3)
        .ok_or(Error::ReducibleCurve { a, b })?;
    let lin = residual.coeffs_in(0);
    if lin.len() != 2 || lin[1].is_zero() {
        return Err(Error::ReducibleCurve { a, b });
    }
    let (ca, cb) = (lin[0].to_upoly(2), lin[1].to_upoly(2));
    // X = -A/B, Y = mu b X / (mu a - X)
    let m = UPoly::x();
    let sa = UPoly::constant(rat(a));
    let sb = UPoly::constant(rat(b));
    let s = binary_pair(&cb, &(&cb - &ca));
    let t0 = &(&(&m * &sa) * &cb) + &ca;
    let t1 = &t0 - &(&(&m * &sb) * &ca);
    let t = binary_pair(&t0, &t1);
    let curve = ParamCurve::p1xp1(s, t)?;
    if !curve
        .pullback(&Family::Cuspidal { a, b }.equation())
        .is_zero()
    {
        return Err(Error::Invalid(
            "cuspidal parametrization failed its identity check".into(),
        ));
    }
    Ok(curve)
}

/// The curve families through the target point `([1:1],[1:1])`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Line(Line),
    Conic { a: i64, b: i64 },
    Nodal { a: i64, b: i64 },
    Cuspidal { a: i64, b: i64 },
}

impl Family {
    /// Defining bihomogeneous equation in `(s0, s1, t0, t1)`.
    pub fn equation(&self) -> MPoly {
        let v = |i| MPoly::var(4, i);
        let (s0, s1, t0, t1) = (v(0), v(1), v(2), v(3));
        let c = |k: i64| MPoly::constant(4, rat(k));
        let ds = &s0 - &s1;
        let dt = &t0 - &t1;
        match *self {
            Family::Line(Line::L1) => ds,
            Family::Line(Line::L2) => dt,
            Family::Conic { a, b } => {
                &(&c(a) * &(&(&s0 * &t0) - &(&s1 * &t1))) + &(&c(b) * &(&ds * &dt))
            }
            Family::Nodal { a, b } => {
                let l = &(&c(a) * &(&s0 * &s1)) * &dt.pow(2);
                let r = &(&c(b) * &(&t0 * &t1)) * &ds.pow(2);
                &l - &r
            }
            Family::Cuspidal { a, b } => {
                let p1 = &(&c(a * a) * &dt.pow(2)) * &(&s0 * &s1);
                let p2 = &(&c(b * b) * &ds.pow(2)) * &(&t0 * &t1);
                let p3 = &(&(&c(2 * a * b) * &(&s1 * &t1)) * &ds) * &dt;
                &(&p1 + &p2) - &p3
            }
        }
    }

    pub fn param(&self) -> Result<ParamCurve> {
        match *self {
            Family::Line(l) => Ok(line_param(l)),
            Family::Conic { a, b } => conic_param(a, b),
            Family::Nodal { a, b } => nodal_param(a, b),
            Family::Cuspidal { a, b } => cuspidal_param(a, b),
        }
    }

    /// Degree for the log anticanonical bundle, multiplicity at the target
    /// and boundary splitting data.
    pub fn meta(&self) -> Result<CurveMeta> {
        match *self {
            Family::Line(_) => {
                CurveMeta::new(1, Multiplicity::Single(1), CurveKind::LogRational, None)
            }
            Family::Conic { .. } => {
                CurveMeta::new(2, Multiplicity::Single(1), CurveKind::LogRational, None)
            }
            Family::Nodal { a, b } => {
                let ab = BigInt::from(a) * b;
                let disc = if ab.is_positive() && is_square(ab.to_u64().unwrap_or(0)) {
                    None
                } else {
                    squarefree_kernel(&ab).to_i64()
                };
                CurveMeta::new(
                    4,
                    Multiplicity::Branches(vec![1, 1]),
                    CurveKind::ToroidalNodal,
                    disc,
                )
            }
            Family::Cuspidal { .. } => {
                CurveMeta::new(4, Multiplicity::Single(2), CurveKind::LogRational, None)
            }
        }
    }

    /// Value of the defining equation at integer coordinates.
    pub fn eval<T: Int>(&self, s0: &T, s1: &T, t0: &T, t1: &T) -> T {
        let c = |k: i64| T::from_i64(k).expect("family parameter fits the integer type");
        let ds = s0.clone() - s1.clone();
        let dt = t0.clone() - t1.clone();
        match *self {
            Family::Line(Line::L1) => ds,
            Family::Line(Line::L2) => dt,
            Family::Conic { a, b } => {
                c(a) * (s0.clone() * t0.clone() - s1.clone() * t1.clone()) + c(b) * ds * dt
            }
            Family::Nodal { a, b } => {
                c(a) * s0.clone() * s1.clone() * dt.clone() * dt
                    - c(b) * t0.clone() * t1.clone() * ds.clone() * ds
            }
            Family::Cuspidal { a, b } => {
                c(a * a) * dt.clone() * dt.clone() * s0.clone() * s1.clone()
                    + c(b * b) * ds.clone() * ds.clone() * t0.clone() * t1.clone()
                    - c(2 * a * b) * s1.clone() * t1.clone() * ds * dt
            }
        }
    }

    /// Whether the point lies on the curve.
    pub fn contains<T: Int>(&self, y: &P1xP1Point<T>) -> bool {
        let small = |x: &T| x.to_i64().is_some_and(|v| v.unsigned_abs() < 1 << 28);
        let (s0, s1, t0, t1) = (y.s.a(), y.s.b(), y.t.a(), y.t.b());
        if [s0, s1, t0, t1].into_iter().all(small) {
            let w = |x: &T| x.to_i128().unwrap();
            self.eval(&w(s0), &w(s1), &w(t0), &w(t1)) == 0
        } else {
            self.eval(&s0.to_big(), &s1.to_big(), &t0.to_big(), &t1.to_big()).is_zero()
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Line(Line::L1) => write!(f, "line1"),
            Family::Line(Line::L2) => write!(f, "line2"),
            Family::Conic { a, b } => write!(f, "conic({a},{b})"),
            Family::Nodal { a, b } => write!(f, "nodal({a},{b})"),
            Family::Cuspidal { a, b } => write!(f, "cuspidal({a},{b})"),
        }
    }
}

/// Certificate of an integral reparametrization
/// `tau -> curve([p0 + r0 c tau : p1 + r1 c tau])`.
#[derive(Clone, Debug)]
pub struct Reparametrization {
    pub base: (BigInt, BigInt),
    /// Boundary preimage, sent to `tau = infinity`.
    pub direction: (BigInt, BigInt),
    pub scale: BigInt,
    pub rounds: u32,
    pub verified: RangeInclusive<i64>,
    /// Forms of each factor as integer polynomials in `tau`.
    pub forms: Vec<Vec<UPoly>>,
    curve: ParamCurve,
}

impl Reparametrization {
    pub fn parameter(&self, tau: &BigInt) -> (BigInt, BigInt) {
        let ct = &self.scale * tau;
        (
            &self.base.0 + &self.direction.0 * &ct,
            &self.base.1 + &self.direction.1 * &ct,
        )
    }

    pub fn point(&self, tau: &BigInt) -> Result<Vec<Vec<BigInt>>> {
        let (u, v) = self.parameter(tau);
        self.curve.eval(&u, &v)
    }

    pub fn point_p1xp1(&self, tau: &BigInt) -> Result<P1xP1Point<BigInt>> {
        to_p1xp1(&self.point(tau)?)
    }
}

const VERIFY_RANGE: i64 = 1000;
const MAX_ROUNDS: u32 = 8;

fn radical(n: &BigInt) -> BigInt {
    prime_divisors(n, 1_000_000)
        .into_iter()
        .fold(BigInt::one(), |acc, p| acc * p)
}

/// Finds a scale `c` so that every integer `tau` gives an integral point.
///
/// The boundary preimage is moved to `tau = infinity`. The initial scale is
/// the radical of the resultants of each factor's forms (primes where the
/// map degenerates); verification over `tau` in `-1000..=1000` multiplies in
/// the primes of any observed obstruction and retries.
pub fn integral_reparametrize(
    curve: &ParamCurve,
    base: (BigInt, BigInt),
    boundary: &BoundaryModel,
    integrality: &dyn Integrality,
) -> Result<Reparametrization> {
    let (b0, b1) = {
        let v = gcd_normalize_vec(&[base.0, base.1])?;
        (v[0].clone(), v[1].clone())
    };
    let image = curve.eval(&b0, &b1)?;
    if !integrality.is_integral_point(&image) {
        return Err(Error::NotIntegralBase);
    }
    let pre = boundary_preimages(curve, boundary)?;
    let direction = match (pre.rational.as_slice(), &pre.quadratic, pre.other_degree) {
        ([r], None, 0) => r.clone(),
        ([], None, 0) => {
            if b1.is_zero() {
                (BigInt::zero(), BigInt::one())
            } else {
                (BigInt::one(), BigInt::zero())
            }
        }
        _ => {
            return Err(Error::Invalid(
                "reparametrization needs a single rational boundary preimage".into(),
            ))
        }
    };
    let mut scale = BigInt::one();
    for forms in curve.factors() {
        let polys: Vec<UPoly> = forms.iter().map(|f| f.dehomogenize_binary()).collect();
        let mut g = BigInt::zero();
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                let r = homogeneous_resultant(&forms[i], &forms[j], &polys[i], &polys[j]);
                g = g.gcd(&r);
            }
        }
        if !g.is_zero() {
            scale *= radical(&g);
        }
    }
    let scale = scale.abs();
    let mut rep = Reparametrization {
        base: (b0, b1),
        direction,
        scale,
        rounds: 0,
        verified: -VERIFY_RANGE..=VERIFY_RANGE,
        forms: vec![],
        curve: curve.clone(),
    };
    for round in 1..=MAX_ROUNDS {
        rep.rounds = round;
        let bad = (-VERIFY_RANGE..=VERIFY_RANGE).find_map(|tau| {
            let pt = rep.point(&BigInt::from(tau)).ok()?;
            let o = integrality.obstruction(&pt);
            (!o.abs().is_one()).then_some(o)
        });
        match bad {
            None => {
                rep.forms = substituted_forms(&rep);
                return Ok(rep);
            }
            Some(o) if o.is_zero() => {
                return Err(Error::VerificationFailed {
                    scale: rep.scale,
                    rounds: round,
                })
            }
            Some(o) => rep.scale *= radical(&o),
        }
    }
    Err(Error::VerificationFailed {
        scale: rep.scale,
        rounds: MAX_ROUNDS,
    })
}

fn homogeneous_resultant(f: &MPoly, g: &MPoly, pf: &UPoly, pg: &UPoly) -> BigInt {
    // Resultant of the binary forms: dehomogenized resultant, times the
    // leading-coefficient power when a form drops degree at infinity.
    let (df, dg) = (
        f.total_degree().unwrap_or(0) as usize,
        g.total_degree().unwrap_or(0) as usize,
    );
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    let (ef, eg) = (pf.degree().unwrap_or(0), pg.degree().unwrap_or(0));
    if ef < df && eg < dg {
        return BigInt::zero();
    }
    let mut r = pf.resultant(pg);
    if ef < df {
        r *= num_traits::pow(pg.lead(), df - ef);
    }
    if eg < dg {
        r *= num_traits::pow(pf.lead(), dg - eg);
    }
    r.to_integer()
}

fn substituted_forms(rep: &Reparametrization) -> Vec<Vec<UPoly>> {
    let u = UPoly::new(vec![
        rat(rep.base.0.clone()),
        rat(&rep.direction.0 * &rep.scale),
    ]);
    let v = UPoly::new(vec![
        rat(rep.base.1.clone()),
        rat(&rep.direction.1 * &rep.scale),
    ]);
    rep.curve
        .factors()
        .iter()
        .map(|forms| {
            forms
                .iter()
                .map(|f| {
                    f.terms().fold(UPoly::zero(), |acc, (e, c)| {
                        &acc + &(&u.pow(e[0]) * &v.pow(e[1])).scale(c)
                    })
                })
                .collect()
        })
        .collect()
}

/// Plane cuspidal cubic `a x^2 z = y^3` parametrized by `[a u^3 : a u^2 v : v^3]`.
pub fn plane_cuspidal_cubic(a: i64) -> Result<ParamCurve> {
    if a == 0 {
        return Err(Error::DegenerateParameters { a, b: 0 });
    }
    ParamCurve::new(vec![vec![
        form(&[(a, [3, 0])]),
        form(&[(a, [2, 1])]),
        form(&[(1, [0, 3])]),
    ]])
}

/// Integral points `(x, y)` with `|x| <= limit` on `2 y^2 = x^2 (2x + 1)`.
pub fn nodal_cubic_integral_points(limit: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for x in -limit..=limit {
        let rhs = (x as i128) * (x as i128) * (2 * x as i128 + 1);
        if rhs < 0 || rhs % 2 != 0 {
            continue;
        }
        let y2 = rhs / 2;
        let y = num_integer::Roots::sqrt(&y2);
        if y * y == y2 {
            out.push((x, y as i64));
            if y != 0 {
                out.push((x, -(y as i64)));
            }
        }
    }
    out
}

/// Integral members of a unit-group orbit on a nodal quartic.
#[derive(Clone, Debug)]
pub struct UnitOrbit {
    pub disc: u64,
    pub base_param: BigRational,
    pub pell: PellSolution,
    /// Smallest period of the integrality pattern over the scanned powers.
    pub period: u32,
    /// Residues modulo `period` of the powers with integral image.
    pub offsets: Vec<u32>,
}

const ORBIT_SCAN: usize = 200;

/// Parameter `P/Q` after applying the `k`-th power of the Pell unit to `p = 0`,
/// through `p -> (m p + n b)/(n a p + m)`.
pub fn orbit_parameter(a: i64, b: i64, pell: &PellSolution, k: i64) -> (BigInt, BigInt) {
    let (m, n) = (
        pell.m().clone(),
        if k < 0 { -pell.n() } else { pell.n().clone() },
    );
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    let (mut p, mut q) = (BigInt::zero(), BigInt::one());
    for _ in 0..k.unsigned_abs() {
        let np = &m * &p + &n * &b * &q;
        let nq = &n * &a * &p + &m * &q;
        let g = np.gcd(&nq);
        p = np / &g;
        q = nq / g;
    }
    (p, q)
}

/// Unit orbit of the base parameter `0` on the nodal quartic, together with
/// its first `count` integral members.
pub fn nodal_orbit(a: i64, b: i64, count: usize) -> Result<(UnitOrbit, Vec<P1xP1Point<BigInt>>)> {
    let curve = nodal_param(a, b)?;
    let ab = a * b;
    if ab <= 0 || is_square(ab as u64) {
        return Err(Error::NoRealUnits { disc: ab });
    }
    let pell = pell_fundamental(ab as u64)?;
    let (m, n) = (pell.m().clone(), pell.n().clone());
    let (ba, bb) = (BigInt::from(a), BigInt::from(b));
    let (mut p, mut q) = (BigInt::zero(), BigInt::one());
    let mut pattern = Vec::new();
    let mut points = Vec::new();
    let mut k = 0usize;
    while k < ORBIT_SCAN || points.len() < count {
        k += 1;
        let np = &m * &p + &n * &bb * &q;
        let nq = &n * &ba * &p + &m * &q;
        let g = np.gcd(&nq);
        p = np / &g;
        q = nq / g;
        let y = curve.eval_p1xp1(&p, &q)?;
        let ok = is_integral(&y).unwrap_or(false);
        if k <= ORBIT_SCAN {
            pattern.push(ok);
        }
        if ok && points.len() < count {
            points.push(y);
        }
        if k >= ORBIT_SCAN && points.is_empty() {
            break;
        }
    }
    let period = (1..=pattern.len() / 2)
        .find(|&e| (0..pattern.len() - e).all(|i| pattern[i] == pattern[i + e]))
        .unwrap_or(pattern.len());
    let offsets = (0..period)
        .filter(|&r| pattern[r])
        .map(|r| ((r + 1) % period) as u32)
        .collect::<Vec<_>>();
    let mut offsets = offsets;
    offsets.sort_unstable();
    let orbit = UnitOrbit {
        disc: ab as u64,
        base_param: BigRational::zero(),
        pell,
        period: period as u32,
        offsets,
    };
    Ok((orbit, points))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn pt(s0: i64, s1: i64, t0: i64, t1: i64) -> P1xP1Point<BigInt> {
        P1xP1Point::from_coords(bi(s0), bi(s1), bi(t0), bi(t1)).unwrap()
    }

    #[test]
    fn line_examples() {
        assert_eq!(
            line_points(Line::L1, 0i64),
            P1xP1Point::from_coords(1, 1, 1, 0).unwrap()
        );
        assert_eq!(
            line_points(Line::L2, 0i64),
            P1xP1Point::from_coords(1, 0, 1, 1).unwrap()
        );
        let y = line_points(Line::L1, 2i64);
        assert_eq!(y, P1xP1Point::from_coords(1, 1, 3, 2).unwrap());
        assert!(is_integral(&y).unwrap());
        for n in -300i64..300 {
            for l in [Line::L1, Line::L2] {
                let y = line_points(l, n);
                assert!(is_integral(&y).unwrap());
                assert!(Family::Line(l).contains(&y));
            }
        }
    }

    #[test]
    fn conic_examples() {
        let c = conic_param(1, 1).unwrap();
        assert_eq!(c.eval_p1xp1(&bi(2), &bi(1)).unwrap(), pt(2, 1, 2, 3));
        for (a, b) in [(1, 1), (2, 3), (-3, 5)] {
            let c = conic_param(a, b).unwrap();
            assert_eq!(c.eval_p1xp1(&bi(1), &bi(1)).unwrap(), pt(1, 1, 1, 1));
            assert!(c.pullback(&Family::Conic { a, b }.equation()).is_zero());
            let expected = MPoly::from_terms(2, &[(b, &[2, 0]), (-2 * b, &[1, 1]), (b, &[0, 2])]);
            assert_eq!(c.pullback(BoundaryModel::dp6().equation()), expected);
        }
        assert_eq!(
            conic_param(0, 1),
            Err(Error::DegenerateParameters { a: 0, b: 1 })
        );
    }

    #[test]
    fn classification_examples() {
        let b = BoundaryModel::dp6();
        let cls = classify_log_curve(&conic_param(1, 1).unwrap(), &b).unwrap();
        assert_eq!(cls.kind, LogKind::LogRational);
        assert_eq!(cls.boundary_preimage_degree, 1);
        let cls = classify_log_curve(&nodal_param(1, 2).unwrap(), &b).unwrap();
        assert_eq!(
            cls,
            CurveClass {
                kind: LogKind::Toroidal,
                boundary_preimage_degree: 2,
                nodal: true,
                splitting_disc: Some(2)
            }
        );
        let cls = classify_log_curve(&nodal_param(1, -2).unwrap(), &b).unwrap();
        assert_eq!(cls.splitting_disc, Some(-2));
        // diagonal curve against a boundary with three simple roots u v (u - v)
        let diag = ParamCurve::p1xp1(
            [form(&[(1, [1, 0])]), form(&[(1, [0, 1])])],
            [form(&[(1, [1, 0])]), form(&[(1, [0, 1])])],
        )
        .unwrap();
        let three = MPoly::from_terms(4, &[(1, &[1, 0, 0, 1]), (-1, &[0, 1, 0, 1])]);
        let three = &three * &MPoly::var(4, 2);
        let cls = classify_log_curve(&diag, &BoundaryModel::new(three, vec![]).unwrap()).unwrap();
        assert_eq!(cls.kind, LogKind::HigherLogGenus);
        // the diagonal meets the boundary in [1:1] and [1:-1]
        let cls = classify_log_curve(&diag, &b).unwrap();
        assert_eq!((cls.kind, cls.nodal, cls.splitting_disc), (LogKind::Toroidal, false, None));
        // the anti-diagonal lies inside it
        let anti = ParamCurve::p1xp1(
            [form(&[(1, [1, 0])]), form(&[(1, [0, 1])])],
            [form(&[(1, [0, 1])]), form(&[(1, [1, 0])])],
        )
        .unwrap();
        assert_eq!(
            classify_log_curve(&anti, &b),
            Err(Error::BoundaryContainsCurve)
        );
    }

    #[test]
    fn infinitude_predicate() {
        let b = BoundaryModel::dp6();
        let s12 = classify_log_curve(&nodal_param(1, 2).unwrap(), &b).unwrap();
        assert!(has_infinitely_many(&s12, true));
        let s1m2 = classify_log_curve(&nodal_param(1, -2).unwrap(), &b).unwrap();
        assert!(!has_infinitely_many(&s1m2, true));
        let log = CurveClass {
            kind: LogKind::LogRational,
            boundary_preimage_degree: 1,
            nodal: false,
            splitting_disc: None,
        };
        assert!(!has_infinitely_many(&log, false));
        assert!(has_infinitely_many(&log, true));
    }

    #[test]
    fn nodal_orbit_examples() {
        let (orbit, pts) = nodal_orbit(1, 2, 2).unwrap();
        assert_eq!(pts[0], pt(4, 3, 3, 2));
        assert_eq!(pts[1], pt(120, 119, 85, 84));
        assert_eq!(orbit.disc, 2);
        let pell = &orbit.pell;
        assert_eq!(orbit_parameter(1, 2, pell, 2), (bi(24), bi(17)));
        let (p, q) = orbit_parameter(1, 2, pell, -1);
        let y = nodal_param(1, 2).unwrap().eval_p1xp1(&p, &q).unwrap();
        assert_eq!(y, pt(20, 21, 15, 14));
        assert!(matches!(
            nodal_orbit(1, -2, 3),
            Err(Error::NoRealUnits { disc: -2 })
        ));
        assert!(matches!(
            nodal_orbit(1, 4, 3),
            Err(Error::NoRealUnits { disc: 4 })
        ));
    }

    #[test]
    fn orbit_points_lie_on_curve_and_grow() {
        let (_, pts) = nodal_orbit(1, 2, 30).unwrap();
        let fam = Family::Nodal { a: 1, b: 2 };
        for y in &pts {
            assert!(fam.contains(y));
            assert!(is_integral(y).unwrap());
        }
    }

    #[test]
    fn cuspidal_examples() {
        for (a, b) in [(1, 2), (2, 1), (3, -1), (-2, 5)] {
            let c = cuspidal_param(a, b).unwrap();
            assert!(c.pullback(&Family::Cuspidal { a, b }.equation()).is_zero());
            assert_eq!(c.degrees(), vec![2, 2]);
        }
        assert!(Family::Cuspidal { a: 1, b: 2 }.contains(&pt(1, 0, 1, 0)));
        assert!(is_integral(&pt(1, 0, 1, 0)).unwrap());
        assert_eq!(
            cuspidal_param(1, -1),
            Err(Error::ReducibleCurve { a: 1, b: -1 })
        );
        assert_eq!(
            cuspidal_param(-1, 1),
            Err(Error::ReducibleCurve { a: -1, b: 1 })
        );
    }

    #[test]
    fn reparametrization_examples() {
        let b = BoundaryModel::dp6();
        let dp6 = crate::delpezzo6::Dp6Integrality;
        let rep = integral_reparametrize(&line_param(Line::L1), (bi(0), bi(1)), &b, &dp6).unwrap();
        assert_eq!(rep.scale, bi(1));
        let rep =
            integral_reparametrize(&conic_param(1, 1).unwrap(), (bi(2), bi(1)), &b, &dp6).unwrap();
        assert_eq!(rep.point_p1xp1(&bi(0)).unwrap(), pt(2, 1, 2, 3));
        assert_eq!(rep.scale, bi(1));
        for a in [2i64, 3, 6, 7] {
            let curve = plane_cuspidal_cubic(a).unwrap();
            let rep = integral_reparametrize(
                &curve,
                (bi(1), bi(0)),
                &BoundaryModel::hyperplane(2, 0),
                &HyperplaneComplement { coord: 0 },
            )
            .unwrap();
            assert_eq!(rep.scale, bi(a));
            // [1 : a tau] is the alternative parametrization [u^3 : a u^2 v : a^2 v^3] at v = tau
            assert_eq!(
                rep.point(&bi(5)).unwrap(),
                vec![vec![bi(1), bi(5 * a), bi(125 * a * a)]]
            );
        }
        let bad = integral_reparametrize(&conic_param(1, 1).unwrap(), (bi(3), bi(1)), &b, &dp6);
        assert_eq!(bad.unwrap_err(), Error::NotIntegralBase);
    }

    #[test]
    fn singular_control() {
        assert_eq!(nodal_cubic_integral_points(10_000), vec![(0, 0)]);
        let f = MPoly::from_terms(2, &[(2, &[0, 2]), (-2, &[3, 0]), (-1, &[2, 0])]);
        let origin = [BigRational::zero(), BigRational::zero()];
        assert_eq!(crate::metrics::multiplicity_at(&f, &origin), Ok(2));
    }
}
