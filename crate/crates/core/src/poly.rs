//! Small exact polynomial toolkit over the rationals.
//!
//! Univariate polynomials back the binary-form pullbacks used to classify
//! curves; sparse multivariate polynomials hold curve equations and
//! parametrizations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Univariate polynomial, coefficients from the constant term up.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl UPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: vec![] }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(BigRational::one()), |acc, _| &acc * self)
    }

    /// `p(a + b x)`.
    pub fn compose_linear(&self, a: &BigRational, b: &BigRational) -> Self {
        let lin = UPoly::new(vec![a.clone(), b.clone()]);
        self.coeffs.iter().rev().fold(UPoly::zero(), |acc, c| {
            &(&acc * &lin) + &UPoly::constant(c.clone())
        })
    }

    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        let inv = d.lead().recip();
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let f = r.last().unwrap() * &inv;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[shift + i] -= c * &f;
            }
            q[shift] = f;
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        (UPoly::new(q), UPoly::new(r))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> UPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Scaled copy with coprime integer coefficients and positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * rat(l.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        ints.into_iter().map(|x| x / &g).collect()
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let mut roots = Vec::new();
        if self.is_zero() {
            return roots;
        }
        let mut ints = self.primitive_integer();
        if ints[0].is_zero() {
            roots.push(BigRational::zero());
            let k = ints.iter().take_while(|c| c.is_zero()).count();
            ints.drain(..k);
        }
        if ints.len() > 1 {
            let p = UPoly::new(ints.iter().map(|c| rat(c.clone())).collect());
            let a0 = divisors(&ints[0]);
            let an = divisors(ints.last().unwrap());
            for num in &a0 {
                for den in &an {
                    for sign in [1, -1] {
                        let r = BigRational::new(num * sign, den.clone());
                        if p.eval(&r).is_zero() && !roots.contains(&r) {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Resultant via the Sylvester matrix.
    pub fn resultant(&self, other: &UPoly) -> BigRational {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return BigRational::zero();
        };
        if m + n == 0 {
            return BigRational::one();
        }
        let size = m + n;
        let mut rows = vec![vec![BigRational::zero(); size]; size];
        for i in 0..n {
            for j in 0..=m {
                rows[i][i + j] = self.coeffs[m - j].clone();
            }
        }
        for i in 0..m {
            for j in 0..=n {
                rows[n + i][i + j] = other.coeffs[n - j].clone();
            }
        }
        determinant(rows)
    }
}

/// Positive divisors of `|n|` (n nonzero), by trial division.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det *= &piv;
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &piv;
            for j in c..n {
                let t = &m[c][j] * &f;
                m[i][j] -= t;
            }
        }
    }
    det
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }
}

/// Sparse multivariate polynomial in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            format!("x{i}")
                        } else {
                            format!("x{i}^{k}")
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigRational::one());
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs.
    pub fn from_terms(nvars: usize, terms: &[(i64, &[u32])]) -> Self {
        let mut p = Self::zero(nvars);
        for (c, e) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e.to_vec(), rat(*c));
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(e.clone())
            .or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Lowest total degree among the terms.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, a) in &self.terms {
            p.add_term(e.clone(), a * c);
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.nvars, BigRational::one()), |acc, _| {
            &acc * self
        })
    }

    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.nvars);
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            total += t;
        }
        total
    }

    pub fn eval_int(&self, x: &[BigInt]) -> BigRational {
        let xs: Vec<BigRational> = x.iter().map(|v| rat(v.clone())).collect();
        self.eval(&xs)
    }

    /// Substitutes `subs[i]` for variable `i`; all substitutes share one ring.
    pub fn substitute(&self, subs: &[MPoly]) -> MPoly {
        assert_eq!(subs.len(), self.nvars);
        let target = subs[0].nvars;
        let mut out = MPoly::zero(target);
        let mut powers: Vec<Vec<MPoly>> = subs
            .iter()
            .map(|s| vec![MPoly::constant(target, BigRational::one()), s.clone()])
            .collect();
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &subs[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Moves `point` to the origin: `f(x + point)`.
    pub fn translate(&self, point: &[BigRational]) -> MPoly {
        let subs: Vec<MPoly> = (0..self.nvars)
            .map(|i| &MPoly::var(self.nvars, i) + &MPoly::constant(self.nvars, point[i].clone()))
            .collect();
        self.substitute(&subs)
    }

    /// Single-variable view; panics unless only `var` occurs.
    pub fn to_upoly(&self, var: usize) -> UPoly {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut c = vec![BigRational::zero(); deg + 1];
        for (e, a) in &self.terms {
            assert!(
                e.iter().enumerate().all(|(i, &k)| i == var || k == 0),
                "not univariate"
            );
            c[e[var] as usize] += a;
        }
        UPoly::new(c)
    }

    pub fn from_upoly(p: &UPoly, nvars: usize, var: usize) -> MPoly {
        let mut out = MPoly::zero(nvars);
        for (i, c) in p.coeffs().iter().enumerate() {
            let mut e = vec![0; nvars];
            e[var] = i as u32;
            out.add_term(e, c.clone());
        }
        out
    }

    /// Coefficients of the powers of `var`, lowest first.
    pub fn coeffs_in(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![MPoly::zero(self.nvars); deg + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[var] as usize;
            e2[var] = 0;
            out[k].add_term(e2, c.clone());
        }
        out
    }

    /// Exact division by `var^k`, if every term is divisible.
    pub fn div_var_power(&self, var: usize, k: u32) -> Option<MPoly> {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] < k {
                return None;
            }
            let mut e2 = e.clone();
            e2[var] -= k;
            out.add_term(e2, c.clone());
        }
        Some(out)
    }

    /// Dehomogenizes a binary form in variables `(u, v)` at `v = 1`.
    pub fn dehomogenize_binary(&self) -> UPoly {
        assert_eq!(self.nvars, 2);
        let mut c = vec![BigRational::zero(); self.degree_in(0).unwrap_or(0) as usize + 1];
        for (e, a) in &self.terms {
            c[e[0] as usize] += a;
        }
        UPoly::new(c)
    }

    /// Homogenizes a univariate polynomial into a binary form of degree `deg`.
    pub fn homogenize_binary(p: &UPoly, deg: u32) -> MPoly {
        let mut out = MPoly::zero(2);
        for (i, c) in p.coeffs().iter().enumerate() {
            out.add_term(vec![i as u32, deg - i as u32], c.clone());
        }
        out
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-BigRational::one())
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        self + &(-o)
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        assert_eq!(self.nvars, o.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        // (x - 1)^2 (x + 2)
        let p = &UPoly::from_ints(&[-1, 1]).pow(2) * &UPoly::from_ints(&[2, 1]);
        let sf = p.squarefree_part();
        assert_eq!(sf, &UPoly::from_ints(&[-1, 1]) * &UPoly::from_ints(&[2, 1]));
        let roots = p.rational_roots();
        assert_eq!(roots, vec![rat(-2), rat(1)]);
        let (q, r) = p.divrem(&UPoly::from_ints(&[2, 1]));
        assert!(r.is_zero());
        assert_eq!(q, UPoly::from_ints(&[-1, 1]).pow(2));
    }

    #[test]
    fn rational_roots_with_denominators() {
        // (2x - 3)(3x + 1) x
        let p = &(&UPoly::from_ints(&[-3, 2]) * &UPoly::from_ints(&[1, 3])) * &UPoly::x();
        assert_eq!(
            p.rational_roots(),
            vec![
                BigRational::new((-1).into(), 3.into()),
                rat(0),
                BigRational::new(3.into(), 2.into())
            ]
        );
        assert!(UPoly::from_ints(&[-2, 0, 1]).rational_roots().is_empty());
    }

    #[test]
    fn resultant_detects_common_roots() {
        let a = UPoly::from_ints(&[-1, 1]);
        let b = UPoly::from_ints(&[-2, 1]);
        assert_eq!(a.resultant(&b).abs(), rat(1));
        let c = &a * &b;
        assert!(c.resultant(&a).is_zero());
        // Res(x^2 - 2, x - 3) = 7
        assert_eq!(
            UPoly::from_ints(&[-2, 0, 1])
                .resultant(&UPoly::from_ints(&[-3, 1]))
                .abs(),
            rat(7)
        );
    }

    #[test]
    fn substitution_and_translation() {
        // f = x0 * x1 - 1 at (1, 1) translated: (y0+1)(y1+1) - 1 = y0 y1 + y0 + y1
        let f = &(&MPoly::var(2, 0) * &MPoly::var(2, 1)) - &MPoly::constant(2, rat(1));
        let g = f.translate(&[rat(1), rat(1)]);
        assert_eq!(g.order(), Some(1));
        assert_eq!(g.total_degree(), Some(2));
        assert!(g.eval(&[rat(0), rat(0)]).is_zero());
    }
}
