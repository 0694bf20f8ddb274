//! Smooth complete split toric varieties over the rationals: fans, primitive
//! collections, Cartier data, Cox heights, integral points on the complement
//! of one boundary divisor, and the approximation experiment near it.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{
    AlphaConfig, AlphaEstimate, Frontier, LiouvilleAccumulator, LiouvilleExponent, LiouvilleWindow,
};
use crate::poly::determinant;

/// A fan given by primitive ray generators and its maximal cones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    /// Each maximal cone as a list of ray indices.
    pub max_cones: Vec<Vec<usize>>,
}

/// A fan file: the fan plus optional registered data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanFile {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ample: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_rays: Option<Vec<usize>>,
}

impl FanFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidFan(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("fan files serialize")
    }

    /// The fan, without validation.
    pub fn fan(&self) -> Fan {
        Fan {
            dim: self.dim,
            rays: self.rays.clone(),
            max_cones: self.max_cones.clone(),
        }
    }

    pub fn line_bundle(&self) -> Option<LineBundle> {
        self.ample.clone().map(LineBundle::new)
    }
}

/// A failed fan condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    RayDimension { ray: usize },
    NonPrimitiveRay { ray: usize },
    ConeSize { cone: usize },
    RayIndex { cone: usize },
    NotUnimodular { cone: usize, det: i64 },
    /// A facet of `cone` shared by `shared` other maximal cones instead of one.
    UnpairedFacet {
        cone: usize,
        facet: Vec<usize>,
        shared: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RayDimension { ray } => write!(f, "ray {ray} has the wrong dimension"),
            Violation::NonPrimitiveRay { ray } => write!(f, "ray {ray} is not primitive"),
            Violation::ConeSize { cone } => write!(f, "cone {cone} does not have dim rays"),
            Violation::RayIndex { cone } => write!(f, "cone {cone} refers to a missing ray"),
            Violation::NotUnimodular { cone, det } => {
                write!(f, "cone {cone} has determinant {det}")
            }
            Violation::UnpairedFacet {
                cone,
                facet,
                shared,
            } => write!(
                f,
                "facet {facet:?} of cone {cone} is shared by {shared} other cones"
            ),
        }
    }
}

/// Checks primitivity of rays, smoothness of maximal cones and completeness
/// (every facet of a maximal cone lies in exactly one other maximal cone).
pub fn validate_fan(fan: &Fan) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, r) in fan.rays.iter().enumerate() {
        if r.len() != fan.dim {
            out.push(Violation::RayDimension { ray: i });
        } else if r.iter().fold(0i64, |g, x| g.gcd(x)) != 1 {
            out.push(Violation::NonPrimitiveRay { ray: i });
        }
    }
    if !out.is_empty() {
        return out;
    }
    let mut cones = Vec::new();
    for (c, cone) in fan.max_cones.iter().enumerate() {
        let mut s = cone.clone();
        s.sort_unstable();
        s.dedup();
        if s.len() != fan.dim {
            out.push(Violation::ConeSize { cone: c });
            continue;
        }
        if s.iter().any(|&i| i >= fan.rays.len()) {
            out.push(Violation::RayIndex { cone: c });
            continue;
        }
        let det = int_det(&s.iter().map(|&i| fan.rays[i].clone()).collect::<Vec<_>>());
        if det.abs() != 1 {
            out.push(Violation::NotUnimodular { cone: c, det });
        }
        cones.push((c, s));
    }
    for (c, s) in &cones {
        for skip in 0..s.len() {
            let facet: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &i)| i)
                .collect();
            let shared = cones
                .iter()
                .filter(|(d, t)| d != c && facet.iter().all(|i| t.contains(i)))
                .count();
            if shared != 1 {
                out.push(Violation::UnpairedFacet {
                    cone: *c,
                    facet,
                    shared,
                });
            }
        }
    }
    out
}

fn int_det(rows: &[Vec<i64>]) -> i64 {
    let m = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    determinant(m).to_integer().to_i64().expect("small determinant")
}

/// Solves `m x = b` for square `m` over the rationals.
fn solve(m: &[Vec<i64>], b: &[i64]) -> Option<Vec<BigRational>> {
    let n = m.len();
    let q = |x: i64| BigRational::from_integer(x.into());
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .zip(b)
        .map(|(row, &bi)| row.iter().map(|&x| q(x)).chain([q(bi)]).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(p, c);
        let piv = a[c][c].clone();
        for j in c..=n {
            a[c][j] = &a[c][j] / &piv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=n {
                    let t = &a[c][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

fn integral(v: Vec<BigRational>) -> Option<Vec<i64>> {
    v.into_iter()
        .map(|x| x.is_integer().then(|| x.to_integer().to_i64()).flatten())
        .collect()
}

fn transpose(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    (0..rows[0].len())
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect()
}

impl Fan {
    /// Validates and builds a fan.
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        let fan = Fan {
            dim,
            rays,
            max_cones: max_cones
                .into_iter()
                .map(|mut c| {
                    c.sort_unstable();
                    c
                })
                .collect(),
        };
        let v = validate_fan(&fan);
        if v.is_empty() {
            Ok(fan)
        } else {
            Err(Error::InvalidFan(
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "),
            ))
        }
    }

    /// Projective space: rays `e_1..e_n, -(e_1+..+e_n)`.
    pub fn projective(n: usize) -> Self {
        let mut rays: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        rays.push(vec![-1; n]);
        let cones = (0..=n)
            .rev()
            .map(|skip| (0..=n).filter(|&i| i != skip).collect())
            .collect();
        Fan::new(n, rays, cones).expect("projective fan")
    }

    /// Product fan; rays of `self` come first.
    pub fn product(&self, other: &Fan) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut rays: Vec<Vec<i64>> = self
            .rays
            .iter()
            .map(|r| r.iter().copied().chain(std::iter::repeat(0).take(m)).collect())
            .collect();
        rays.extend(
            other
                .rays
                .iter()
                .map(|r| std::iter::repeat(0).take(n).chain(r.iter().copied()).collect()),
        );
        let k = self.rays.len();
        let mut cones = Vec::new();
        for a in &self.max_cones {
            for b in &other.max_cones {
                cones.push(a.iter().copied().chain(b.iter().map(|i| i + k)).collect());
            }
        }
        Fan::new(n + m, rays, cones).expect("product fan")
    }

    /// Hirzebruch surface: rays `e1, e2, -e1 + e e2, -e2`.
    pub fn hirzebruch(e: i64) -> Self {
        Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, e], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        )
        .expect("hirzebruch fan")
    }

    /// The hexagon fan of the degree-6 del Pezzo surface, rays in cyclic order.
    pub fn hexagon() -> Self {
        Fan::new(
            2,
            vec![
                vec![1, 0],
                vec![1, 1],
                vec![0, 1],
                vec![-1, 0],
                vec![-1, -1],
                vec![0, -1],
            ],
            (0..6).map(|i| vec![i, (i + 1) % 6]).collect(),
        )
        .expect("hexagon fan")
    }

    pub fn nrays(&self) -> usize {
        self.rays.len()
    }

    /// Rank of the Picard group, `#rays - dim`, after checking that the rays
    /// span the lattice.
    pub fn picard_rank(&self) -> Result<usize> {
        let full = self.max_cones.iter().any(|c| {
            int_det(&c.iter().map(|&i| self.rays[i].clone()).collect::<Vec<_>>()).abs() == 1
        });
        if !full {
            return Err(Error::InvalidFan("rays do not span the lattice".into()));
        }
        Ok(self.nrays() - self.dim)
    }

    /// Whether the rays generate a cone of the fan.
    pub fn is_face(&self, rays: &[usize]) -> bool {
        self.max_cones
            .iter()
            .any(|c| rays.iter().all(|r| c.contains(r)))
    }

    fn ray_sum(&self, rays: &[usize]) -> Vec<i64> {
        (0..self.dim)
            .map(|k| rays.iter().map(|&r| self.rays[r][k]).sum())
            .collect()
    }

    /// Dual basis of a maximal cone: `m_i` with `<m_i, u_k> = delta_ik` for
    /// the cone's rays `u_k` in the given order.
    fn dual_basis(&self, cone: &[usize]) -> Result<Vec<Vec<i64>>> {
        let rows: Vec<Vec<i64>> = cone.iter().map(|&i| self.rays[i].clone()).collect();
        (0..cone.len())
            .map(|i| {
                let e: Vec<i64> = (0..cone.len()).map(|k| i64::from(i == k)).collect();
                solve(&rows, &e)
                    .and_then(integral)
                    .ok_or(Error::InvalidFan("cone is not unimodular".into()))
            })
            .collect()
    }

    /// Exponents `<m_i, n_rho>` of the chart coordinates of a maximal cone.
    fn chart_exponents(&self, cone: &[usize]) -> Result<Vec<Vec<i64>>> {
        let dual = self.dual_basis(cone)?;
        Ok(dual
            .iter()
            .map(|m| {
                self.rays
                    .iter()
                    .map(|r| m.iter().zip(r).map(|(a, b)| a * b).sum())
                    .collect()
            })
            .collect())
    }

    /// Sign vectors of the Neron-Severi torus over the integers: `eps` in
    /// `{+-1}^rays` with `prod eps_rho^{n_rho} = 1`.
    fn sign_group(&self) -> Vec<Vec<bool>> {
        let k = self.nrays();
        (0u32..1 << k)
            .filter(|mask| {
                (0..self.dim).all(|j| {
                    (0..k)
                        .filter(|&r| mask >> r & 1 == 1)
                        .map(|r| self.rays[r][j])
                        .sum::<i64>()
                        % 2
                        == 0
                })
            })
            .map(|mask| (0..k).map(|r| mask >> r & 1 == 1).collect())
            .collect()
    }
}

/// Primitive collections, split by whether the generators sum to zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveCollections {
    pub central: Vec<Vec<usize>>,
    pub other: Vec<Vec<usize>>,
}

impl PrimitiveCollections {
    pub fn all(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.central.iter().chain(&self.other)
    }
}

/// Subsets of rays that do not generate a cone while all proper subsets do.
pub fn primitive_collections(fan: &Fan) -> PrimitiveCollections {
    let k = fan.nrays();
    assert!(k < 24, "too many rays for subset search");
    let mut out = PrimitiveCollections::default();
    for mask in 1u32..1 << k {
        let set: Vec<usize> = (0..k).filter(|&r| mask >> r & 1 == 1).collect();
        if set.len() < 2 || fan.is_face(&set) {
            continue;
        }
        let minimal = (0..set.len()).all(|skip| {
            let sub: Vec<usize> = set
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &r)| r)
                .collect();
            fan.is_face(&sub)
        });
        if minimal {
            if fan.ray_sum(&set).iter().all(|&x| x == 0) {
                out.central.push(set);
            } else {
                out.other.push(set);
            }
        }
    }
    out
}

pub fn central_primitive_collections(fan: &Fan) -> PrimitiveCollections {
    primitive_collections(fan)
}

/// A maximal cone `sigma0` such that every other ray is a combination of
/// its rays with nonpositive integer coefficients; it exists exactly when
/// the pseudoeffective cone is simplicial.
pub fn simplicial_effective_cone(fan: &Fan) -> Option<Vec<usize>> {
    fan.max_cones
        .iter()
        .find(|cone| outside_coefficients(fan, cone).is_some())
        .cloned()
}

fn outside_coefficients(fan: &Fan, cone: &[usize]) -> Option<Vec<Vec<i64>>> {
    let cols = transpose(&cone.iter().map(|&i| fan.rays[i].clone()).collect::<Vec<_>>());
    (0..fan.nrays())
        .filter(|r| !cone.contains(r))
        .map(|r| {
            let c = integral(solve(&cols, &fan.rays[r])?)?;
            c.iter().all(|&x| x <= 0).then_some(c)
        })
        .collect()
}

/// The relations `n_{outside j} + sum_i b_ij n_{sigma0 i} = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relations {
    pub sigma0: Vec<usize>,
    pub outside: Vec<usize>,
    /// `b[i][j]` for `i` over `sigma0`, `j` over `outside`.
    pub b: Vec<Vec<i64>>,
}

pub fn relations_b(fan: &Fan, sigma0: &[usize]) -> Result<Relations> {
    let coeffs = outside_coefficients(fan, sigma0).ok_or(Error::NotSimplicial)?;
    let outside: Vec<usize> = (0..fan.nrays()).filter(|r| !sigma0.contains(r)).collect();
    let b = (0..sigma0.len())
        .map(|i| coeffs.iter().map(|c| -c[i]).collect())
        .collect();
    Ok(Relations {
        sigma0: sigma0.to_vec(),
        outside,
        b,
    })
}

/// A torus-invariant divisor `sum a_rho D_rho`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineBundle {
    pub coeffs: Vec<i64>,
}

impl LineBundle {
    pub fn new(coeffs: Vec<i64>) -> Self {
        LineBundle { coeffs }
    }

    /// `O(1)` on projective space as a coefficient on the first ray.
    pub fn hyperplane(nrays: usize) -> Self {
        let mut c = vec![0; nrays];
        c[0] = 1;
        LineBundle { coeffs: c }
    }

    /// Anticanonical divisor: every coefficient one.
    pub fn anticanonical(nrays: usize) -> Self {
        LineBundle {
            coeffs: vec![1; nrays],
        }
    }

    fn check(&self, fan: &Fan) -> Result<()> {
        if self.coeffs.len() == fan.nrays() {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "line bundle has {} coefficients for {} rays",
                self.coeffs.len(),
                fan.nrays()
            )))
        }
    }
}

/// Per maximal cone: `m_sigma` and the divisor `D(sigma) = a - <m_sigma, n>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartierData {
    pub m: Vec<Vec<i64>>,
    pub d: Vec<Vec<i64>>,
    pub nef: bool,
    pub ample: bool,
}

pub fn cartier_data(fan: &Fan, l: &LineBundle) -> Result<CartierData> {
    l.check(fan)?;
    let mut ms = Vec::new();
    let mut ds = Vec::new();
    let (mut nef, mut ample) = (true, true);
    for cone in &fan.max_cones {
        let rows: Vec<Vec<i64>> = cone.iter().map(|&i| fan.rays[i].clone()).collect();
        let rhs: Vec<i64> = cone.iter().map(|&i| l.coeffs[i]).collect();
        let m = solve(&rows, &rhs)
            .and_then(integral)
            .ok_or(Error::InvalidFan("cone is not unimodular".into()))?;
        let d: Vec<i64> = fan
            .rays
            .iter()
            .zip(&l.coeffs)
            .map(|(r, a)| a - m.iter().zip(r).map(|(x, y)| x * y).sum::<i64>())
            .collect();
        for (rho, &c) in d.iter().enumerate() {
            if c < 0 {
                nef = false;
            }
            if !cone.contains(&rho) && c <= 0 {
                ample = false;
            }
        }
        ms.push(m);
        ds.push(d);
    }
    Ok(CartierData {
        m: ms,
        d: ds,
        nef,
        ample: ample && nef,
    })
}

/// Degree of `L` on the minimal curves of a central primitive collection.
pub fn delta_p(fan: &Fan, l: &LineBundle, collection: &[usize]) -> Result<i64> {
    l.check(fan)?;
    if collection.is_empty() || fan.ray_sum(collection).iter().any(|&x| x != 0) {
        return Err(Error::NotCentral);
    }
    Ok(collection.iter().map(|&r| l.coeffs[r]).sum())
}

/// Smallest degree over central primitive collections meeting `boundary`;
/// the several-boundary-rays variant.
pub fn delta_for_boundary(fan: &Fan, l: &LineBundle, boundary: &[usize]) -> Result<Option<i64>> {
    let pc = primitive_collections(fan);
    let mut best: Option<i64> = None;
    for p in &pc.central {
        if p.iter().any(|r| boundary.contains(r)) {
            let d = delta_p(fan, l, p)?;
            best = Some(best.map_or(d, |b| b.min(d)));
        }
    }
    Ok(best)
}

/// Integer Cox coordinates, one per ray.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CoxPoint {
    coords: Vec<i64>,
}

impl CoxPoint {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.iter().all(|&x| x == 0) {
            return Err(Error::ZeroVector);
        }
        Ok(CoxPoint { coords })
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Whether the rays whose coordinate a prime divides always span a cone,
    /// tested as coprimality over every primitive collection.
    pub fn is_primitive(&self, fan: &Fan) -> bool {
        self.coords.len() == fan.nrays()
            && primitive_collections(fan)
                .all()
                .all(|p| p.iter().fold(0i64, |g, &r| g.gcd(&self.coords[r])) == 1)
    }
}

impl fmt::Display for CoxPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(", "))
    }
}

impl CartierData {
    /// `max_sigma |X^{D(sigma)}|`.
    pub fn height(&self, x: &[i64]) -> Result<BigInt> {
        if !self.nef {
            return Err(Error::NotNef);
        }
        Ok(self
            .d
            .iter()
            .map(|d| {
                x.iter()
                    .zip(d)
                    .map(|(&c, &e)| BigInt::from(c).abs().pow(e as u32))
                    .product::<BigInt>()
            })
            .max()
            .unwrap_or_else(BigInt::one))
    }
}

/// Height of a primitive Cox point for a nef divisor.
pub fn cox_height(fan: &Fan, l: &LineBundle, x: &CoxPoint) -> Result<BigInt> {
    cartier_data(fan, l)?.height(x.coords())
}

/// Affine coordinates `y_i = prod_rho X_rho^{<m_i, n_rho>}` on the chart of a
/// maximal cone, in the cone's ray order.
pub fn chart_coords(fan: &Fan, cone: &[usize], x: &CoxPoint) -> Result<Vec<BigRational>> {
    let exps = fan.chart_exponents(cone)?;
    for (r, &c) in x.coords().iter().enumerate() {
        if c == 0 && !cone.contains(&r) {
            return Err(Error::OutsideChart);
        }
    }
    Ok(exps
        .iter()
        .map(|row| {
            row.iter()
                .zip(x.coords())
                .fold(BigRational::one(), |acc, (&e, &c)| {
                    let c = BigRational::from_integer(c.into());
                    match e.cmp(&0) {
                        std::cmp::Ordering::Equal => acc,
                        std::cmp::Ordering::Greater => acc * c.pow(e as i32),
                        std::cmp::Ordering::Less => acc / c.pow((-e) as i32),
                    }
                })
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Domain {
    Zero,
    Unit,
    PositiveUnit,
    Positive,
    Nonzero,
}

/// Chart data restricting inner coordinates to a neighbourhood of the target.
#[derive(Clone, Debug)]
struct Window {
    /// Chart coordinate index of each ray inside the chart cone.
    slot: Vec<Option<usize>>,
    exps: Vec<Vec<i64>>,
    target: Vec<Ratio<i128>>,
    radius: Ratio<i128>,
}

impl Window {
    /// `prod_{rho outside} x_rho^{e_i,rho}` for chart coordinate `i`.
    fn factor(&self, i: usize, x: &[i64], outside: &[usize]) -> Ratio<i128> {
        let (mut num, mut den) = (1i128, 1i128);
        for &r in outside {
            let e = self.exps[i][r];
            let v = x[r] as i128;
            if e > 0 {
                num *= v.pow(e as u32);
            } else if e < 0 {
                den *= v.pow((-e) as u32);
            }
        }
        Ratio::new(num, den)
    }
}

/// Exact depth-first search over Cox coordinates for one zero pattern.
struct Plan<'a> {
    order: Vec<usize>,
    domains: Vec<Domain>,
    monos: Vec<Vec<u32>>,
    bound: u128,
    collections: &'a [Vec<usize>],
    /// Sign group and priority order, when the leaf must be tested for being
    /// the canonical orbit representative.
    canonical: Option<(&'a [Vec<bool>], &'a [usize])>,
    window: Option<&'a Window>,
    outside: &'a [usize],
}

/// Leaf data: coordinates, height and (with a window) the chart distance.
type Leaf<'b> = (&'b [i64], u64, Option<Ratio<i128>>);

impl Plan<'_> {
    /// Candidate values of coordinate `c` given the partial monomials.
    fn range(&self, c: usize, partials: &[u128], x: &[i64], factor: &mut Option<Ratio<i128>>) -> Option<(i64, i64)> {
        let dom = self.domains[c];
        if dom == Domain::Zero {
            return Some((0, 0));
        }
        let mut max_abs = u128::MAX;
        for (k, m) in self.monos.iter().enumerate() {
            let e = m[c];
            if e > 0 {
                let room = self.bound / partials[k];
                max_abs = max_abs.min(room.nth_root(e));
            }
        }
        if max_abs == u128::MAX {
            max_abs = self.bound;
        }
        let max_abs = max_abs.min(i64::MAX as u128) as i64;
        let (mut lo, mut hi) = match dom {
            Domain::Unit => (-1, 1),
            Domain::PositiveUnit => (1, 1),
            Domain::Positive => (1, max_abs),
            _ => (-max_abs, max_abs),
        };
        lo = lo.max(-max_abs);
        hi = hi.min(max_abs);
        if let Some(w) = self.window {
            if let Some(i) = w.slot[c] {
                let q = w.factor(i, x, self.outside);
                // x q in (y - r, y + r), q > 0
                let a = (w.target[i] - w.radius) / q;
                let b = (w.target[i] + w.radius) / q;
                lo = lo.max((a.floor().to_integer() + 1) as i64);
                hi = hi.min((b.ceil().to_integer() - 1) as i64);
                *factor = Some(q);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    fn run(&self, depth: usize, x: &mut Vec<i64>, stack: &mut Vec<Vec<u128>>, qs: &mut Vec<Ratio<i128>>, visit: &mut dyn FnMut(Leaf<'_>)) {
        if depth == self.order.len() {
            self.leaf(x, &stack[depth], qs, visit);
            return;
        }
        let c = self.order[depth];
        let mut factor = None;
        let Some((lo, hi)) = self.range(c, &stack[depth], x, &mut factor) else {
            return;
        };
        if let (Some(w), Some(q)) = (self.window, factor) {
            qs[w.slot[c].unwrap()] = q;
        }
        for v in lo..=hi {
            if v == 0 && self.domains[c] != Domain::Zero {
                continue;
            }
            let a = v.unsigned_abs() as u128;
            let (cur, next) = stack.split_at_mut(depth + 1);
            let mut ok = true;
            for (k, m) in self.monos.iter().enumerate() {
                let e = m[c];
                let p = if e == 0 { cur[depth][k] } else { cur[depth][k] * a.pow(e) };
                if p > self.bound {
                    ok = false;
                }
                next[0][k] = p;
            }
            if !ok {
                continue;
            }
            x[c] = v;
            self.run(depth + 1, x, stack, qs, visit);
        }
        x[c] = 0;
    }

    fn leaf(&self, x: &[i64], partials: &[u128], qs: &[Ratio<i128>], visit: &mut dyn FnMut(Leaf<'_>)) {
        for p in self.collections {
            if p.iter().fold(0i64, |g, &r| g.gcd(&x[r])) != 1 {
                return;
            }
        }
        if let Some((group, priority)) = self.canonical {
            if !is_canonical(x, group, priority) {
                return;
            }
        }
        let h = partials.iter().copied().max().unwrap_or(1) as u64;
        let d = self.window.map(|w| {
            let mut d = Ratio::zero();
            for (r, slot) in w.slot.iter().enumerate() {
                if let Some(i) = slot {
                    let y = qs[*i] * Ratio::from_integer(x[r] as i128);
                    let diff = (y - w.target[*i]).abs();
                    if diff > d {
                        d = diff;
                    }
                }
            }
            d
        });
        visit((x, h, d));
    }
}

fn sign_key(x: &[i64], flip: &[bool], priority: &[usize]) -> Vec<i64> {
    priority
        .iter()
        .map(|&r| if flip[r] { -x[r].signum() } else { x[r].signum() })
        .collect()
}

fn is_canonical(x: &[i64], group: &[Vec<bool>], priority: &[usize]) -> bool {
    let id = vec![false; x.len()];
    let mine = sign_key(x, &id, priority);
    group.iter().all(|g| sign_key(x, g, priority) <= mine)
}

/// Representative of the sign-action orbit: positive entries first in the
/// priority order given by the rays outside the reference cone.
pub fn canonical_representative(fan: &Fan, x: &CoxPoint) -> CoxPoint {
    let group = fan.sign_group();
    let priority = priority_order(fan, &reference_cone(fan));
    let best = group
        .iter()
        .max_by_key(|g| sign_key(x.coords(), g, &priority))
        .expect("identity is in the group");
    CoxPoint {
        coords: x
            .coords()
            .iter()
            .zip(best)
            .map(|(&c, &f)| if f { -c } else { c })
            .collect(),
    }
}

fn reference_cone(fan: &Fan) -> Vec<usize> {
    simplicial_effective_cone(fan).unwrap_or_else(|| fan.max_cones[0].clone())
}

fn priority_order(fan: &Fan, cone: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..fan.nrays()).filter(|r| !cone.contains(r)).collect();
    p.extend(cone.iter().copied());
    p
}

/// Every face of the fan (including the empty one), as sorted ray lists.
fn faces(fan: &Fan) -> Vec<Vec<usize>> {
    let mut out = std::collections::BTreeSet::new();
    for cone in &fan.max_cones {
        for mask in 0u32..1 << cone.len() {
            let f: Vec<usize> = cone
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &r)| r)
                .collect();
            out.insert(f);
        }
    }
    out.into_iter().collect()
}

/// Largest height bound accepted by the enumerators.
pub const MAX_TORIC_BOUND: u64 = 1_000_000_000_000;

struct Setup {
    cartier: CartierData,
    collections: Vec<Vec<usize>>,
    delta: i64,
}

fn setup(fan: &Fan, l: &LineBundle, boundary: &[usize], bound: u64) -> Result<(usize, Setup)> {
    let [star] = boundary else {
        return Err(Error::Invalid(format!(
            "exactly one boundary ray is supported, got {}",
            boundary.len()
        )));
    };
    let star = *star;
    if star >= fan.nrays() {
        return Err(Error::Invalid(format!("no ray {star}")));
    }
    if !(1..=MAX_TORIC_BOUND).contains(&bound) {
        return Err(Error::Invalid(format!("height bound {bound} out of range")));
    }
    let cartier = cartier_data(fan, l)?;
    if !cartier.ample {
        return Err(Error::NotAmple);
    }
    let pc = primitive_collections(fan);
    let collection = pc
        .central
        .iter()
        .find(|p| p.contains(&star))
        .ok_or(Error::UnsupportedBoundary(star))?;
    let delta = delta_p(fan, l, collection)?;
    let collections = pc.all().cloned().collect();
    Ok((
        star,
        Setup {
            cartier,
            collections,
            delta,
        },
    ))
}

fn monos_for(cartier: &CartierData, zero: &[usize]) -> Vec<Vec<u32>> {
    cartier
        .d
        .iter()
        .filter(|d| zero.iter().all(|&r| d[r] == 0))
        .map(|d| d.iter().map(|&e| e as u32).collect())
        .collect()
}

/// Folds over the integral points of the complement of `D_rho*` with height
/// at most `bound`, one representative per sign orbit. Each integral point
/// has `x_rho* = +-1`; the search box per coordinate comes from the ample
/// monomials `X^{D(sigma)}` that do not vanish on the point's zero pattern,
/// which bound every nonzero coordinate, so the search is complete.
pub fn fold_toric<A, I, V, M>(
    fan: &Fan,
    l: &LineBundle,
    boundary: &[usize],
    bound: u64,
    init: I,
    visit: V,
    merge: M,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    V: Fn(&mut A, &CoxPoint, u64) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    let (star, s) = setup(fan, l, boundary, bound)?;
    let cone = reference_cone(fan);
    let priority = priority_order(fan, &cone);
    let outside: Vec<usize> = (0..fan.nrays()).filter(|r| !cone.contains(r)).collect();
    let group = fan.sign_group();
    let zero_sets: Vec<Vec<usize>> = faces(fan).into_iter().filter(|z| !z.contains(&star)).collect();
    let acc = zero_sets
        .par_iter()
        .map(|zero| {
            let signs_free = zero.iter().any(|r| outside.contains(r));
            let domains: Vec<Domain> = (0..fan.nrays())
                .map(|r| {
                    let pos = !signs_free && outside.contains(&r);
                    if zero.contains(&r) {
                        Domain::Zero
                    } else if r == star {
                        if pos {
                            Domain::PositiveUnit
                        } else {
                            Domain::Unit
                        }
                    } else if pos {
                        Domain::Positive
                    } else {
                        Domain::Nonzero
                    }
                })
                .collect();
            let plan = Plan {
                order: priority.clone(),
                domains,
                monos: monos_for(&s.cartier, zero),
                bound: bound as u128,
                collections: &s.collections,
                canonical: signs_free.then_some((group.as_slice(), priority.as_slice())),
                window: None,
                outside: &outside,
            };
            let mut acc = init();
            let mut x = vec![0i64; fan.nrays()];
            let mut stack = vec![vec![1u128; plan.monos.len()]; fan.nrays() + 1];
            let mut qs = Vec::new();
            plan.run(0, &mut x, &mut stack, &mut qs, &mut |(x, h, _)| {
                visit(&mut acc, &CoxPoint { coords: x.to_vec() }, h)
            });
            acc
        })
        .reduce(&init, &merge);
    Ok(acc)
}

/// Integral points of `U_A` with height at most `bound`, sorted by height
/// and then coordinates.
pub fn enumerate_toric(fan: &Fan, l: &LineBundle, boundary: &[usize], bound: u64) -> Result<Vec<(u64, CoxPoint)>> {
    let mut pts = fold_toric(
        fan,
        l,
        boundary,
        bound,
        Vec::new,
        |acc, x, h| acc.push((h, x.clone())),
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    )?;
    pts.sort_unstable();
    Ok(pts)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    /// Only points with chart distance below this radius are visited.
    pub radius: Ratio<i64>,
    pub alpha: AlphaConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            radius: Ratio::new(1, 2),
            alpha: AlphaConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ToricAlphaReport {
    pub estimate: AlphaEstimate,
    /// Degree of the central primitive collection through the boundary ray.
    pub delta: i64,
    /// Whether the pseudoeffective cone is simplicial; the predicted value
    /// applies only then.
    pub simplicial: bool,
    /// Maximal cone whose chart measures distances.
    pub chart: Vec<usize>,
    /// Dyadic minima of `d^delta H`.
    pub windows: Vec<LiouvilleWindow>,
    pub near_points: u64,
}

/// The default target on `D_rho*`: Cox coordinate 0 at the boundary ray and
/// 1 elsewhere.
pub fn default_target(fan: &Fan, star: usize) -> CoxPoint {
    CoxPoint {
        coords: (0..fan.nrays()).map(|r| i64::from(r != star)).collect(),
    }
}

/// Approximation experiment near a point of the open part of `D_rho*`.
///
/// Distances are `max_i |y_i(P) - y_i(x)|` in the chart of a maximal cone
/// containing the boundary ray (the simplicial witness cone when it
/// qualifies); only points at distance below `config.radius` are visited.
pub fn toric_alpha_experiment(
    fan: &Fan,
    l: &LineBundle,
    boundary: &[usize],
    x: &CoxPoint,
    bound: u64,
    config: &ExperimentConfig,
) -> Result<ToricAlphaReport> {
    let (star, s) = setup(fan, l, boundary, bound)?;
    let xc = x.coords();
    if xc.len() != fan.nrays() || xc[star] != 0 || xc.iter().enumerate().any(|(r, &c)| r != star && c == 0) {
        return Err(Error::Invalid("target must vanish exactly at the boundary ray".into()));
    }
    let sigma0 = simplicial_effective_cone(fan);
    let chart = match &sigma0 {
        Some(c) if c.contains(&star) => c.clone(),
        _ => fan
            .max_cones
            .iter()
            .find(|c| c.contains(&star))
            .cloned()
            .expect("every ray lies in a maximal cone"),
    };
    let exps = fan.chart_exponents(&chart)?;
    let target: Vec<Ratio<i128>> = chart_coords(fan, &chart, x)?
        .iter()
        .map(|q| {
            Ratio::new(
                q.numer().to_i128().expect("small target"),
                q.denom().to_i128().expect("small target"),
            )
        })
        .collect();
    let mut slot = vec![None; fan.nrays()];
    for (i, &r) in chart.iter().enumerate() {
        slot[r] = Some(i);
    }
    let radius = Ratio::new(*config.radius.numer() as i128, *config.radius.denom() as i128);
    let window = Window {
        slot,
        exps,
        target: target.clone(),
        radius,
    };
    let outside: Vec<usize> = (0..fan.nrays()).filter(|r| !chart.contains(r)).collect();
    let mut order = outside.clone();
    order.extend(chart.iter().copied());
    // inner zero patterns whose constant contribution stays inside the radius
    let inner: Vec<usize> = chart.iter().copied().filter(|&r| r != star).collect();
    let zero_sets: Vec<Vec<usize>> = (0u32..1 << inner.len())
        .map(|mask| {
            inner
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &r)| r)
                .collect::<Vec<usize>>()
        })
        .filter(|z| z.iter().all(|&r| target[window.slot[r].unwrap()].abs() < radius))
        .collect();
    type Acc = BTreeMap<u32, Frontier<i128>>;
    let merge = |mut a: Acc, b: Acc| {
        for (k, f) in b {
            let cur = a.remove(&k).unwrap_or_default();
            a.insert(k, cur.merge(f));
        }
        a
    };
    let fronts = zero_sets
        .par_iter()
        .map(|zero| {
            let domains: Vec<Domain> = (0..fan.nrays())
                .map(|r| {
                    if zero.contains(&r) {
                        Domain::Zero
                    } else if r == star {
                        Domain::Unit
                    } else if outside.contains(&r) {
                        Domain::Positive
                    } else {
                        Domain::Nonzero
                    }
                })
                .collect();
            let plan = Plan {
                order: order.clone(),
                domains,
                monos: monos_for(&s.cartier, zero),
                bound: bound as u128,
                collections: &s.collections,
                canonical: None,
                window: Some(&window),
                outside: &outside,
            };
            let mut acc = Acc::new();
            let mut x = vec![0i64; fan.nrays()];
            let mut stack = vec![vec![1u128; plan.monos.len()]; fan.nrays() + 1];
            let mut qs = vec![Ratio::zero(); chart.len()];
            plan.run(0, &mut x, &mut stack, &mut qs, &mut |(_, h, d)| {
                let d = d.expect("window distance");
                if d.is_zero() {
                    return;
                }
                acc.entry(63 - h.leading_zeros())
                    .or_default()
                    .push(h as i128, d);
            });
            acc
        })
        .reduce(Acc::new, merge);
    let exponent = LiouvilleExponent::integer(s.delta.max(1) as u32)?;
    let mut liouville = LiouvilleAccumulator::new(exponent);
    let mut all = Frontier::new();
    for f in fronts.into_values() {
        for r in f.records() {
            liouville.push(&r.height, &r.distance);
        }
        all = all.merge(f);
    }
    let near_points = all.count();
    let estimate = all.finish(&config.alpha)?;
    Ok(ToricAlphaReport {
        estimate,
        delta: s.delta,
        simplicial: sigma0.is_some(),
        chart,
        windows: liouville.windows(),
        near_points,
    })
}
