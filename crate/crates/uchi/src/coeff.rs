//! Finite-dimensional commutative local base algebras with a structure map
//! from `U^0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::lattice::Weight;
use crate::linalg::{axpy, is_zero_vec, unit_vec, zero_vec, Mat, Span};
use crate::rootdata::{ChevalleyDatum, TauMap};

/// How an algebra was built; used for dumps and the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraKind {
    /// `F_{p^k}`
    Field { k: usize },
    /// `F_p[eps]/(eps^2)`
    Dual,
    /// `F_p[t]/(t^order)`
    Trunc { order: usize },
    Generic,
}

/// A commutative local algebra `A` over `F_p` with basis `b_0 = 1, b_1, ...`
/// and the images `pi(h_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct BaseAlgebra<S: Scalar> {
    pub kind: AlgebraKind,
    /// `mult[i][j]` are the coordinates of `b_i b_j`
    mult: Vec<Vec<Vec<S>>>,
    /// `pi[j]` are the coordinates of `pi(h_j)`
    pub pi: Vec<Vec<S>>,
    /// basis of the maximal ideal
    maximal: Vec<Vec<S>>,
    /// nondegenerate trace functional, when one exists
    frobenius: Option<Vec<S>>,
}

/// The four algebras derived from `A` by sign and `tau` twists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Derived {
    Bar,
    Tau,
    D,
    DBar,
}

impl<S: Scalar> BaseAlgebra<S> {
    /// Builds from structure constants and verifies the axioms.
    pub fn from_structure(kind: AlgebraKind, mult: Vec<Vec<Vec<S>>>, pi: Vec<Vec<S>>) -> Result<Self> {
        let m = mult.len();
        if m == 0 || mult.iter().any(|r| r.len() != m || r.iter().any(|v| v.len() != m)) {
            return Err(Error::InvalidInput("structure constants must be m x m x m".into()));
        }
        if pi.iter().any(|v| v.len() != m) {
            return Err(Error::InvalidInput("pi values must have length dim A".into()));
        }
        let mut a = BaseAlgebra { kind, mult, pi, maximal: Vec::new(), frobenius: None };
        a.check_axioms()?;
        if a.frobenius_fixed_dim() != 1 {
            return Err(Error::NotLocal);
        }
        a.maximal = a.nilradical();
        if a.dim() - a.maximal.len() > 1 {
            // residue field larger than F_p: the maximal ideal is still the nilradical
        }
        a.frobenius = a.find_frobenius_form();
        Ok(a)
    }

    /// `F_p` with the given values `pi(h_i)`.
    pub fn prime_field(pi: Vec<S>) -> Self {
        let mult = vec![vec![vec![S::one()]]];
        Self::from_structure(AlgebraKind::Field { k: 1 }, mult, pi.into_iter().map(|x| vec![x]).collect()).unwrap()
    }

    /// `F_p` with `pi = 0` on `d` toral generators.
    pub fn zero_field(d: usize) -> Self {
        Self::prime_field(vec![S::zero(); d])
    }

    /// `F_{p^k}` as `F_p[x]/(f)` for the least monic irreducible `f`.
    pub fn extension_field(k: usize, pi: Vec<Vec<S>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("degree must be positive".into()));
        }
        let f = least_irreducible::<S>(k);
        // basis 1, x, ..., x^{k-1}
        let mult: Vec<Vec<Vec<S>>> = (0..k).map(|i| (0..k).map(|j| poly_mod(&monomial::<S>(i + j), &f, k)).collect()).collect();
        Self::from_structure(AlgebraKind::Field { k }, mult, pi)
    }

    /// `F_p[t]/(t^order)`; `pi[j]` lists coefficients of `1, t, ...`.
    pub fn truncated_poly(order: usize, pi: Vec<Vec<S>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput("order must be positive".into()));
        }
        let mult: Vec<Vec<Vec<S>>> = (0..order)
            .map(|i| (0..order).map(|j| if i + j < order { unit_vec(order, i + j) } else { zero_vec(order) }).collect())
            .collect();
        let kind = if order == 2 { AlgebraKind::Dual } else { AlgebraKind::Trunc { order } };
        Self::from_structure(kind, mult, pi)
    }

    /// `F_p[eps]/(eps^2)` with `pi(h_j) = a_j + b_j eps`.
    pub fn dual_numbers(pi: Vec<(S, S)>) -> Self {
        Self::truncated_poly(2, pi.into_iter().map(|(a, b)| vec![a, b]).collect()).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.mult.len()
    }

    /// Number of toral generators carrying a `pi` value.
    pub fn rank(&self) -> usize {
        self.pi.len()
    }

    pub fn is_field(&self) -> bool {
        self.maximal.is_empty()
    }

    pub fn is_prime_field(&self) -> bool {
        self.dim() == 1
    }

    pub fn one(&self) -> Vec<S> {
        unit_vec(self.dim(), 0)
    }

    pub fn mul(&self, x: &[S], y: &[S]) -> Vec<S> {
        let m = self.dim();
        let mut out = zero_vec(m);
        for i in 0..m {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..m {
                if y[j].is_zero() {
                    continue;
                }
                axpy(&mut out, x[i] * y[j], &self.mult[i][j]);
            }
        }
        out
    }

    pub fn pow(&self, x: &[S], e: u64) -> Vec<S> {
        let mut acc = self.one();
        let mut base = x.to_vec();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Matrix of multiplication by `x` in the basis `b`.
    pub fn mult_matrix(&self, x: &[S]) -> Mat<S> {
        let m = self.dim();
        let cols: Vec<Vec<S>> = (0..m).map(|j| self.mul(&unit_vec(m, j), x)).collect();
        Mat::from_cols(&cols, m)
    }

    /// Matrix of multiplication by basis element `b_i`.
    pub fn basis_mult(&self, i: usize) -> Mat<S> {
        self.mult_matrix(&unit_vec(self.dim(), i))
    }

    pub fn maximal_ideal(&self) -> &[Vec<S>] {
        &self.maximal
    }

    pub fn frobenius_form(&self) -> Option<&[S]> {
        self.frobenius.as_deref()
    }

    fn check_axioms(&self) -> Result<()> {
        let m = self.dim();
        let e = |i: usize| unit_vec::<S>(m, i);
        for i in 0..m {
            if self.mul(&e(0), &e(i)) != e(i) || self.mul(&e(i), &e(0)) != e(i) {
                return Err(Error::InvalidInput("b_0 is not a unit".into()));
            }
            for j in 0..m {
                if self.mult[i][j] != self.mult[j][i] {
                    return Err(Error::InvalidInput(format!("not commutative at ({i},{j})")));
                }
                for k in 0..m {
                    let l = self.mul(&self.mult[i][j], &e(k));
                    let r = self.mul(&e(i), &self.mult[j][k]);
                    if l != r {
                        return Err(Error::InvalidInput(format!("not associative at ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrix of the (linear) Frobenius `x -> x^p`.
    fn frobenius_matrix(&self) -> Mat<S> {
        let m = self.dim();
        let cols: Vec<Vec<S>> = (0..m).map(|j| self.pow(&unit_vec(m, j), S::CHAR as u64)).collect();
        Mat::from_cols(&cols, m)
    }

    /// Dimension of `{x : x^p = x}`, which is 1 exactly when `A` is local.
    fn frobenius_fixed_dim(&self) -> usize {
        let f = self.frobenius_matrix();
        f.sub(&Mat::identity(self.dim())).kernel().len()
    }

    fn nilradical(&self) -> Vec<Vec<S>> {
        let m = self.dim();
        let mut f = self.frobenius_matrix();
        let mut pk = S::CHAR as usize;
        while pk < m {
            f = f.mul(&self.frobenius_matrix());
            pk *= S::CHAR as usize;
        }
        f.kernel()
    }

    fn find_frobenius_form(&self) -> Option<Vec<S>> {
        let m = self.dim();
        let nondeg = |phi: &[S]| -> bool {
            let g = Mat::from_fn(m, m, |i, j| self.mult[i][j].iter().zip(phi).fold(S::zero(), |acc, (a, b)| acc + *a * *b));
            g.is_invertible()
        };
        (0..m).rev().map(|i| unit_vec::<S>(m, i)).find(|phi| nondeg(phi))
    }

    /// `pi(mu~(h_j)) = pi(h_j) + d mu(h_j)`.
    pub fn twist_pi(&self, mu: &Weight) -> Vec<Vec<S>> {
        self.pi
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let mut v = v.clone();
                v[0] += S::from_i64(mu.coords()[j] as i64);
                v
            })
            .collect()
    }

    /// `pi(h)` for `h = sum c_j h_j`.
    pub fn pi_of(&self, h: &[i64]) -> Vec<S> {
        let mut out = zero_vec(self.dim());
        for (j, &c) in h.iter().enumerate() {
            axpy(&mut out, S::from_i64(c), &self.pi[j]);
        }
        out
    }

    pub fn with_pi(&self, pi: Vec<Vec<S>>) -> Self {
        BaseAlgebra { pi, ..self.clone() }
    }

    /// Same algebra with a derived structure map.
    pub fn derived(&self, kind: Derived, tau: Option<&TauMap>) -> Result<Self> {
        let need = || tau.ok_or_else(|| Error::InvalidInput("tau map required".into()));
        let d = self.rank();
        let neg = |v: Vec<Vec<S>>| -> Vec<Vec<S>> { v.into_iter().map(|x| x.into_iter().map(|c| -c).collect()).collect() };
        // pi(sum_i m[i][j] h_i) for each j
        let through = |m: &[Vec<i64>]| -> Vec<Vec<S>> {
            (0..d).map(|j| self.pi_of(&(0..d).map(|i| m[i][j]).collect::<Vec<_>>())).collect()
        };
        let pi = match kind {
            Derived::Bar => neg(self.pi.clone()),
            Derived::Tau => through(&need()?.h_inv),
            Derived::D => neg(through(&need()?.h_inv)),
            Derived::DBar => neg(through(&need()?.h)),
        };
        Ok(self.with_pi(pi))
    }

    /// Residue field `A/m` with the quotient map as a matrix.
    pub fn residue_quotient(&self) -> (BaseAlgebra<S>, Mat<S>) {
        let m = self.dim();
        let span = Span::from_vectors(m, self.maximal.iter().cloned());
        let q = span.quotient_basis();
        let k = q.len();
        let qmat = Mat::from_cols(&(0..m).map(|j| span.quotient_coords(&unit_vec(m, j), &q)).collect::<Vec<_>>(), k);
        // representatives: unit vectors at the quotient coordinates
        let lift = |i: usize| -> Vec<S> { unit_vec(m, q[i]) };
        let mut mult = vec![vec![Vec::new(); k]; k];
        for i in 0..k {
            for j in 0..k {
                mult[i][j] = qmat.mul_vec(&self.mul(&lift(i), &lift(j)));
            }
        }
        let pi: Vec<Vec<S>> = self.pi.iter().map(|v| qmat.mul_vec(v)).collect();
        // the unit must sit at index 0 of the quotient basis; b_0 = 1 is never in m
        debug_assert_eq!(q[0], 0);
        let kind = if k == 1 { AlgebraKind::Field { k: 1 } } else { AlgebraKind::Generic };
        let f = BaseAlgebra::from_structure(kind, mult, pi).expect("residue algebra of a local algebra is a field");
        (f, qmat)
    }

    /// Whether `pi(h_alpha) = 0` for every root index in `roots`.
    pub fn check_levi_vanishing(&self, datum: &ChevalleyDatum, roots: &[usize]) -> bool {
        roots.iter().all(|&a| {
            let h: Vec<i64> = datum.coroot(a).iter().map(|&x| x as i64).collect();
            is_zero_vec(&self.pi_of(&h))
        })
    }
}

fn monomial<S: Scalar>(k: usize) -> Vec<S> {
    let mut v = zero_vec(k + 1);
    v[k] = S::one();
    v
}

/// Remainder of `a` modulo monic `f` of degree `k`, padded to length `k`.
fn poly_mod<S: Scalar>(a: &[S], f: &[S], k: usize) -> Vec<S> {
    let mut r = a.to_vec();
    while r.len() > k {
        let c = r.pop().unwrap();
        let shift = r.len() - k;
        for i in 0..k {
            r[shift + i] -= c * f[i];
        }
    }
    r.resize(k, S::zero());
    r
}

/// Coefficients (low to high, without the leading 1) of the least monic
/// irreducible polynomial of degree `k`.
fn least_irreducible<S: Scalar>(k: usize) -> Vec<S> {
    let p = S::CHAR as usize;
    let total = p.pow(k as u32);
    for code in 0..total {
        let f: Vec<S> = (0..k).map(|i| S::from_i64(((code / p.pow(i as u32)) % p) as i64)).collect();
        if is_irreducible(&f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn is_irreducible<S: Scalar>(f: &[S]) -> bool {
    let k = f.len();
    let p = S::CHAR as usize;
    // test every monic divisor of degree 1..=k/2
    for deg in 1..=k / 2 {
        for code in 0..p.pow(deg as u32) {
            let g: Vec<S> = (0..deg).map(|i| S::from_i64(((code / p.pow(i as u32)) % p) as i64)).collect();
            let mut full = f.to_vec();
            full.push(S::one());
            if is_zero_vec(&poly_mod(&full, &g, deg)) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{F3, F5};
    use crate::rootdata::{build_gl, tau, LeviSpec};
    use num_traits::{One, Zero};

    fn f3(x: i64) -> F3 {
        F3::from_i64(x)
    }

    #[test]
    fn prime_field_is_local_field() {
        let a = BaseAlgebra::<F3>::zero_field(2);
        assert!(a.is_field());
        assert_eq!(a.dim(), 1);
    }

    #[test]
    fn dual_numbers_local() {
        let a = BaseAlgebra::dual_numbers(vec![(F3::zero(), F3::one()), (F3::zero(), F3::zero())]);
        assert_eq!(a.maximal_ideal().len(), 1);
        let (f, q) = a.residue_quotient();
        assert_eq!(f.dim(), 1);
        assert_eq!(q.mul_vec(&[f3(2), f3(1)]), vec![f3(2)]);
        assert_eq!(f.pi, vec![vec![f3(0)], vec![f3(0)]]);
    }

    #[test]
    fn truncated_poly_maximal_ideal() {
        let a = BaseAlgebra::<F3>::truncated_poly(3, vec![vec![f3(1), f3(1), f3(0)]]).unwrap();
        assert_eq!(a.maximal_ideal().len(), 2);
        let (f, _) = a.residue_quotient();
        assert_eq!(f.pi, vec![vec![f3(1)]]);
    }

    #[test]
    fn non_local_rejected() {
        // F_3 x F_3 with idempotent basis (1, e)
        let one = vec![f3(1), f3(0)];
        let e = vec![f3(0), f3(1)];
        let mult = vec![vec![one.clone(), e.clone()], vec![e.clone(), e.clone()]];
        assert_eq!(BaseAlgebra::from_structure(AlgebraKind::Generic, mult, vec![]), Err(Error::NotLocal));
    }

    #[test]
    fn extension_field() {
        let a = BaseAlgebra::<F3>::extension_field(2, vec![]).unwrap();
        assert!(a.is_field());
        // every nonzero element is invertible: x^(p^2 - 1) = 1
        for c0 in 0..3 {
            for c1 in 0..3 {
                if c0 == 0 && c1 == 0 {
                    continue;
                }
                assert_eq!(a.pow(&[f3(c0), f3(c1)], 8), a.one());
            }
        }
    }

    #[test]
    fn twist_examples() {
        let a = BaseAlgebra::<F3>::zero_field(2);
        assert_eq!(a.twist_pi(&Weight::new(&[1, 0])), vec![vec![f3(1)], vec![f3(0)]]);
        assert_eq!(a.twist_pi(&Weight::new(&[4, -3])), a.twist_pi(&Weight::new(&[1, 0])));
    }

    #[test]
    fn derived_round_trip() {
        let d = build_gl(2, 3).unwrap();
        let t = tau(&d, &LeviSpec::full(&d)).unwrap();
        let a = BaseAlgebra::dual_numbers(vec![(F3::zero(), F3::one()), (F3::zero(), F3::zero())]);
        let back = a.derived(Derived::D, Some(&t)).unwrap().derived(Derived::DBar, Some(&t)).unwrap();
        assert_eq!(back.pi, a.pi);
        let bb = a.derived(Derived::Bar, None).unwrap().derived(Derived::Bar, None).unwrap();
        assert_eq!(bb.pi, a.pi);
        let z = BaseAlgebra::<F3>::zero_field(2);
        for k in [Derived::Bar, Derived::Tau, Derived::D, Derived::DBar] {
            assert_eq!(z.derived(k, Some(&t)).unwrap().pi, z.pi);
        }
    }

    #[test]
    fn levi_vanishing() {
        let d = build_gl(2, 5).unwrap();
        let all: Vec<usize> = (0..d.num_roots()).collect();
        let e = (F5::zero(), F5::one());
        let z = (F5::zero(), F5::zero());
        assert!(BaseAlgebra::<F5>::zero_field(2).check_levi_vanishing(&d, &all));
        assert!(BaseAlgebra::dual_numbers(vec![e, e]).check_levi_vanishing(&d, &all));
        assert!(!BaseAlgebra::dual_numbers(vec![e, z]).check_levi_vanishing(&d, &all));
    }

    #[test]
    fn frobenius_forms_exist() {
        let a = BaseAlgebra::<F3>::truncated_poly(3, vec![]).unwrap();
        assert_eq!(a.frobenius_form(), Some(&[f3(0), f3(0), f3(1)][..]));
    }
}
