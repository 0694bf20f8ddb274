//! Exact integer and rational primitives.
//!
//! Everything here is exact. Square roots of integers never enter a
//! predicate as floating point values; comparisons against `sqrt(d)` are
//! carried out on squares.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer types the point and height machinery is generic over.
///
/// Enumeration runs on machine integers; generated families (Pell orbits,
/// long progressions) run on [`BigInt`].
pub trait Int:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + Hash
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// Natural logarithm of `|self|`, for the final log step of ratio estimates.
    fn ln_abs(&self) -> f64;
    fn to_big(&self) -> BigInt;
}

macro_rules! impl_int_prim {
    ($($t:ty),*) => {$(
        impl Int for $t {
            fn ln_abs(&self) -> f64 {
                (self.unsigned_abs() as f64).ln()
            }
            fn to_big(&self) -> BigInt {
                BigInt::from(*self)
            }
        }
    )*};
}
impl_int_prim!(i64, i128);

impl Int for BigInt {
    fn ln_abs(&self) -> f64 {
        let bits = self.bits();
        if bits < 1000 {
            self.abs().to_f64().unwrap_or(f64::INFINITY).ln()
        } else {
            let shift = bits - 900;
            let top: BigInt = self.abs() >> shift;
            top.to_f64().unwrap_or(f64::INFINITY).ln() + (shift as f64) * std::f64::consts::LN_2
        }
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Natural logarithm of a positive rational.
pub fn ln_ratio(q: &BigRational) -> f64 {
    q.numer().ln_abs() - q.denom().ln_abs()
}

/// Divides a pair by its gcd and fixes the sign so the first nonzero entry is positive.
pub fn gcd_normalize<T: Int>(a: T, b: T) -> Result<(T, T)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroPair);
    }
    let g = a.gcd(&b);
    let (mut a, mut b) = (a / g.clone(), b / g);
    if a.is_negative() || (a.is_zero() && b.is_negative()) {
        a = -a;
        b = -b;
    }
    Ok((a, b))
}

/// Vector version of [`gcd_normalize`].
pub fn gcd_normalize_vec<T: Int>(v: &[T]) -> Result<Vec<T>> {
    let g = v.iter().fold(T::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    let first_neg = v
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| x.is_negative())
        .unwrap_or(false);
    let g = if first_neg { -g } else { g };
    Ok(v.iter().map(|x| x.clone() / g.clone()).collect())
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= p {
        if p % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(x: &BigInt, p: u64) -> u32 {
    debug_assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    v
}

/// The p-adic max norm `max_i |x_i|_p = p^(-min_i v_p(x_i))` with `|p|_p = 1/p`.
pub fn padic_sup<T: Int>(v: &[T], p: u64) -> Result<BigRational> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let min_val = v
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| valuation(&x.to_big(), p))
        .min()
        .ok_or(Error::ZeroVector)?;
    Ok(BigRational::new(
        BigInt::one(),
        BigInt::from(p).pow(min_val),
    ))
}

pub fn is_square(n: u64) -> bool {
    let r = n.sqrt();
    r * r == n
}

/// Squarefree kernel with sign: `12 -> 3`, `-8 -> -2`, `0 -> 0`.
pub fn squarefree_kernel(n: &BigInt) -> BigInt {
    if n.is_zero() {
        return BigInt::zero();
    }
    let sign = if n.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let mut m = n.abs();
    let mut out = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &p;
        }
        p += 1;
    }
    sign * out * m
}

/// Distinct prime divisors of `|n|` by trial division up to `limit`; any
/// cofactor left over is returned as a last entry (it may be composite).
pub fn prime_divisors(n: &BigInt, limit: u64) -> Vec<BigInt> {
    let mut m = n.abs();
    let mut out = Vec::new();
    if m.is_zero() {
        return out;
    }
    let mut p = 2u64;
    while p <= limit {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        if (&m % &bp).is_zero() {
            out.push(bp.clone());
            while (&m % &bp).is_zero() {
                m /= &bp;
            }
        }
        p += 1;
    }
    if m > BigInt::one() {
        out.push(m);
    }
    out
}

/// Integer part and full period of the continued fraction of `sqrt(d)`.
pub fn continued_fraction_sqrt(d: u64) -> Result<(u64, Vec<u64>)> {
    if is_square(d) {
        return Err(Error::SquareInput(d));
    }
    let a0 = d.sqrt();
    let (mut m, mut q, mut a) = (0u64, 1u64, a0);
    let mut period = Vec::new();
    loop {
        m = q * a - m;
        q = (d - m * m) / q;
        a = (a0 + m) / q;
        period.push(a);
        if a == 2 * a0 {
            break;
        }
    }
    Ok((a0, period))
}

/// A solution of `m^2 - d n^2 = 1` with `m, n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PellSolution {
    d: u64,
    m: BigInt,
    n: BigInt,
}

impl PellSolution {
    pub fn new(d: u64, m: BigInt, n: BigInt) -> Result<Self> {
        if is_square(d) {
            return Err(Error::SquareInput(d));
        }
        if !m.is_positive()
            || !n.is_positive()
            || &m * &m - BigInt::from(d) * &n * &n != BigInt::one()
        {
            return Err(Error::Invalid(format!(
                "({m}, {n}) does not solve m^2 - {d} n^2 = 1"
            )));
        }
        Ok(PellSolution { d, m, n })
    }

    pub fn d(&self) -> u64 {
        self.d
    }
    pub fn m(&self) -> &BigInt {
        &self.m
    }
    pub fn n(&self) -> &BigInt {
        &self.n
    }

    /// `(m + n sqrt d) * (m' + n' sqrt d)` on coefficient pairs.
    pub fn mul_pair(&self, (m2, n2): (&BigInt, &BigInt)) -> (BigInt, BigInt) {
        let d = BigInt::from(self.d);
        (&self.m * m2 + d * &self.n * n2, &self.m * n2 + &self.n * m2)
    }
}

/// Fundamental solution of the Pell equation from the convergents of `sqrt(d)`.
///
/// For odd period the last convergent of the first period solves the norm
/// `-1` equation; its square is returned.
pub fn pell_fundamental(d: u64) -> Result<PellSolution> {
    let (a0, period) = continued_fraction_sqrt(d)?;
    let (mut h_prev, mut h) = (BigInt::one(), BigInt::from(a0));
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    for &a in &period[..period.len() - 1] {
        let a = BigInt::from(a);
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
    let bd = BigInt::from(d);
    let (m, n) = if period.len() % 2 == 0 {
        (h, k)
    } else {
        (&h * &h + &bd * &k * &k, BigInt::from(2) * &h * &k)
    };
    PellSolution::new(d, m, n)
}

/// `(m_k, n_k)` with `m_k + n_k sqrt d = (m + n sqrt d)^k` for `k = 1..=count`.
pub fn unit_powers(sol: &PellSolution, count: usize) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::with_capacity(count);
    let mut cur = (sol.m.clone(), sol.n.clone());
    for _ in 0..count {
        out.push(cur.clone());
        cur = sol.mul_pair((&cur.0, &cur.1));
    }
    out
}

/// Whether `m - n sqrt(d) < delta`, decided on squares.
pub fn conjugate_below(m: &BigInt, n: &BigInt, d: u64, delta: &BigRational) -> bool {
    // m - n sqrt d < delta  <=>  m - delta < n sqrt d
    let lhs = BigRational::from_integer(m.clone()) - delta;
    let rhs_sq = BigRational::from_integer(BigInt::from(d) * n * n);
    match (lhs.is_negative(), n.is_negative()) {
        (true, false) => true,
        (false, true) => false,
        // both sides negative: the inequality flips on squares
        (true, true) => &lhs * &lhs > rhs_sq,
        (false, false) => &lhs * &lhs < rhs_sq,
    }
}

/// The least power `k` of the fundamental Pell unit whose conjugate
/// `m - n sqrt d = 1/(m + n sqrt d)` lies below `delta`.
pub fn norm_one_small_unit(d: u64, delta: &BigRational) -> Result<(BigInt, BigInt, u32)> {
    if !delta.is_positive() {
        return Err(Error::Invalid("delta must be positive".into()));
    }
    let sol = pell_fundamental(d)?;
    let mut cur = (sol.m.clone(), sol.n.clone());
    let mut k = 1;
    loop {
        if conjugate_below(&cur.0, &cur.1, d, delta) {
            return Ok((cur.0, cur.1, k));
        }
        cur = sol.mul_pair((&cur.0, &cur.1));
        k += 1;
    }
}

/// A full-rank lattice in `Q^n` given by exact basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    vectors: Vec<Vec<BigRational>>,
}

impl LatticeBasis {
    pub fn new(vectors: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = vectors.len();
        if n == 0 || vectors.iter().any(|v| v.len() != n) {
            return Err(Error::DegenerateBasis("need n vectors of length n".into()));
        }
        if rank(&vectors) < n {
            return Err(Error::DegenerateBasis(
                "vectors are linearly dependent".into(),
            ));
        }
        Ok(LatticeBasis { vectors })
    }

    pub fn from_integers(vectors: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            vectors
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|&x| BigRational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<BigRational>] {
        &self.vectors
    }

    pub fn combine(&self, coeffs: &[BigInt]) -> Vec<BigRational> {
        let n = self.dim();
        let mut x = vec![BigRational::zero(); n];
        for (c, v) in coeffs.iter().zip(&self.vectors) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += vi * BigRational::from_integer(c.clone());
            }
        }
        x
    }
}

/// Membership in `[1/delta, inf) x [-delta, delta]^(n-1)`.
pub fn in_slab(x: &[BigRational], delta: &BigRational) -> bool {
    let Some((first, rest)) = x.split_first() else {
        return false;
    };
    first * delta >= BigRational::one() && rest.iter().all(|r| r.abs() <= *delta)
}

fn rank(rows: &[Vec<BigRational>]) -> usize {
    row_echelon(rows.to_vec()).0
}

/// Reduced row echelon form; returns rank, matrix and pivot columns.
fn row_echelon(mut m: Vec<Vec<BigRational>>) -> (usize, Vec<Vec<BigRational>>, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (r, m, pivots)
}

/// A lattice point in the slab together with its integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlabPoint {
    pub coeffs: Vec<BigInt>,
    pub point: Vec<BigRational>,
}

/// Finds a lattice point in `[1/delta, inf) x [-delta, delta]^(n-1)`.
///
/// First tries the kernel of the projection onto the last `n - 1`
/// coordinates, scaled until the first coordinate clears `1/delta`. For an
/// exact rational basis that kernel is never trivial; the bounded search of
/// [`slab_search_bounded`] remains as the second route.
pub fn slab_lattice_point(basis: &LatticeBasis, delta: &BigRational) -> Result<SlabPoint> {
    if !delta.is_positive() {
        return Err(Error::Invalid("delta must be positive".into()));
    }
    if let Some(dir) = projection_kernel(basis) {
        return Ok(scale_into_slab(basis, dir, delta));
    }
    slab_search_bounded(basis, delta, 20)
}

fn projection_kernel(basis: &LatticeBasis) -> Option<Vec<BigInt>> {
    let n = basis.dim();
    if n == 1 {
        return Some(vec![BigInt::one()]);
    }
    // rows: coordinates 1..n, columns: basis vectors
    let m: Vec<Vec<BigRational>> = (1..n)
        .map(|j| basis.vectors.iter().map(|v| v[j].clone()).collect())
        .collect();
    let (_, rref, pivots) = row_echelon(m);
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut sol = vec![BigRational::zero(); n];
    sol[free] = BigRational::one();
    for (row, &pc) in pivots.iter().enumerate() {
        sol[pc] = -rref[row][free].clone();
    }
    let lcm = sol.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let ints: Vec<BigInt> = sol
        .iter()
        .map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    Some(ints.into_iter().map(|x| x / &g).collect())
}

fn scale_into_slab(basis: &LatticeBasis, dir: Vec<BigInt>, delta: &BigRational) -> SlabPoint {
    let x = basis.combine(&dir);
    let x0 = x[0].clone();
    let sign = if x0.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    // smallest k >= 1 with k |x0| delta >= 1
    let need = (x0.abs() * delta)
        .recip()
        .ceil()
        .to_integer()
        .max(BigInt::one());
    let k = sign * need;
    let coeffs: Vec<BigInt> = dir.iter().map(|c| c * &k).collect();
    let point = basis.combine(&coeffs);
    SlabPoint { coeffs, point }
}

/// Exhaustive search over coefficient boxes of radius `2^round`, for
/// `round < budget`.
pub fn slab_search_bounded(
    basis: &LatticeBasis,
    delta: &BigRational,
    budget: u32,
) -> Result<SlabPoint> {
    let n = basis.dim();
    let mut searched: i64 = -1;
    for round in 0..budget.min(62) {
        let radius: i64 = 1 << round;
        let mut coeffs = vec![-radius; n];
        loop {
            if coeffs.iter().any(|c| c.abs() > searched) {
                let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
                let x = basis.combine(&big);
                if in_slab(&x, delta) {
                    return Ok(SlabPoint {
                        coeffs: big,
                        point: x,
                    });
                }
            }
            let mut i = 0;
            while i < n {
                coeffs[i] += 1;
                if coeffs[i] <= radius {
                    break;
                }
                coeffs[i] = -radius;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        searched = radius;
    }
    Err(Error::SearchExhausted { budget })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn brute_pell(d: u64) -> (u64, u64) {
        (1u64..)
            .find_map(|n| {
                let m2 = 1 + d * n * n;
                let m = m2.sqrt();
                (m * m == m2).then_some((m, n))
            })
            .unwrap()
    }

    #[test]
    fn gcd_normalize_examples() {
        assert_eq!(gcd_normalize(4i64, 6).unwrap(), (2, 3));
        assert_eq!(gcd_normalize(-3i64, 0).unwrap(), (1, 0));
        assert_eq!(gcd_normalize(0i64, -5).unwrap(), (0, 1));
        assert_eq!(gcd_normalize(0i64, 0), Err(Error::ZeroPair));
    }

    #[test]
    fn padic_examples() {
        assert_eq!(padic_sup(&[4i64, 6], 2).unwrap(), q(1, 2));
        assert_eq!(padic_sup(&[1i64, 10], 3).unwrap(), q(1, 1));
        assert_eq!(padic_sup(&[9i64, 27], 3).unwrap(), q(1, 9));
        assert_eq!(padic_sup(&[0i64, 0], 3), Err(Error::ZeroVector));
        assert_eq!(padic_sup(&[1i64], 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(continued_fraction_sqrt(2).unwrap(), (1, vec![2]));
        assert_eq!(continued_fraction_sqrt(3).unwrap(), (1, vec![1, 2]));
        assert_eq!(continued_fraction_sqrt(4), Err(Error::SquareInput(4)));
        assert_eq!(continued_fraction_sqrt(7).unwrap(), (2, vec![1, 1, 1, 4]));
    }

    #[test]
    fn pell_examples_against_brute_force() {
        for (d, expect) in [(2, (3, 2)), (3, (2, 1)), (6, (5, 2))] {
            assert_eq!(brute_pell(d), expect);
            let s = pell_fundamental(d).unwrap();
            assert_eq!(
                (s.m().clone(), s.n().clone()),
                (BigInt::from(expect.0), BigInt::from(expect.1))
            );
        }
        // odd period: sqrt(13) has period 5
        let s = pell_fundamental(13).unwrap();
        assert_eq!(
            (s.m().clone(), s.n().clone()),
            (BigInt::from(649), BigInt::from(180))
        );
    }

    #[test]
    fn unit_power_examples() {
        let s = pell_fundamental(2).unwrap();
        let p = unit_powers(&s, 2);
        assert_eq!(p, vec![(3.into(), 2.into()), (17.into(), 12.into())]);
        let s = pell_fundamental(3).unwrap();
        let p = unit_powers(&s, 3);
        assert_eq!(
            p,
            vec![
                (2.into(), 1.into()),
                (7.into(), 4.into()),
                (26.into(), 15.into())
            ]
        );
        assert_eq!(unit_powers(&s, 1).len(), 1);
    }

    #[test]
    fn small_unit_examples() {
        assert_eq!(
            norm_one_small_unit(2, &q(1, 5)).unwrap(),
            (3.into(), 2.into(), 1)
        );
        // 17 - 12 sqrt 2 ~ 0.0294 clears 1/20 but not 1/100
        assert_eq!(
            norm_one_small_unit(2, &q(1, 20)).unwrap(),
            (17.into(), 12.into(), 2)
        );
        assert_eq!(
            norm_one_small_unit(2, &q(1, 100)).unwrap(),
            (99.into(), 70.into(), 3)
        );
        assert_eq!(
            norm_one_small_unit(3, &q(1, 1)).unwrap(),
            (2.into(), 1.into(), 1)
        );
        assert_eq!(norm_one_small_unit(9, &q(1, 1)), Err(Error::SquareInput(9)));
    }

    #[test]
    fn slab_examples() {
        let half = q(1, 2);
        let b = LatticeBasis::from_integers(&[vec![1, 0], vec![0, 1]]).unwrap();
        let p = slab_lattice_point(&b, &half).unwrap();
        assert_eq!(p.point, vec![q(2, 1), q(0, 1)]);

        let b = LatticeBasis::from_integers(&[vec![1, 1], vec![0, 3]]).unwrap();
        let p = slab_lattice_point(&b, &half).unwrap();
        assert_eq!(p.coeffs, vec![BigInt::from(3), BigInt::from(-1)]);
        assert_eq!(p.point, vec![q(3, 1), q(0, 1)]);

        let b = LatticeBasis::from_integers(&[vec![5]]).unwrap();
        let p = slab_lattice_point(&b, &half).unwrap();
        assert_eq!(p.point, vec![q(5, 1)]);
    }

    #[test]
    fn bounded_search_route() {
        let b = LatticeBasis::from_integers(&[vec![1, 1], vec![0, 3]]).unwrap();
        let p = slab_search_bounded(&b, &q(1, 2), 20).unwrap();
        assert!(in_slab(&p.point, &q(1, 2)));
        assert_eq!(b.combine(&p.coeffs), p.point);
        // a budget of one round (radius 1) cannot reach x0 >= 10
        let b = LatticeBasis::from_integers(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(
            slab_search_bounded(&b, &q(1, 10), 1),
            Err(Error::SearchExhausted { budget: 1 })
        );
    }

    #[test]
    fn degenerate_basis_rejected() {
        assert!(LatticeBasis::from_integers(&[vec![1, 2], vec![2, 4]]).is_err());
    }

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_kernel(&BigInt::from(12)), BigInt::from(3));
        assert_eq!(squarefree_kernel(&BigInt::from(-8)), BigInt::from(-2));
        assert_eq!(squarefree_kernel(&BigInt::from(2)), BigInt::from(2));
    }
}
