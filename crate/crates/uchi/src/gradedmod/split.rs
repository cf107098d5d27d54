//! Indecomposability, Fitting splitting and isomorphism search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hom::{hom_space, HomSpace};
use super::ops::Submodule;
use super::radical::{algebra_radical, combine_blocks};
use super::{GradedModule, Morphism};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{Mat, Span};

/// Bound on random endomorphisms tried per splitting step.
pub const MAX_SPLIT_ATTEMPTS: usize = 200;

/// Largest `p^k` enumerated exhaustively.
const EXHAUSTIVE_LIMIT: usize = 30_000;

/// A direct summand of a module with its structure maps.
#[derive(Clone, Debug)]
pub struct Summand<S: Scalar> {
    pub module: GradedModule<S>,
    /// summand -> whole
    pub incl: Morphism<S>,
    /// whole -> summand
    pub proj: Morphism<S>,
    /// `incl . proj`
    pub idem: Morphism<S>,
}

fn random_coeffs<S: Scalar>(rng: &mut ChaCha8Rng, k: usize) -> Vec<S> {
    (0..k).map(|_| S::from_i64(rng.gen_range(0..S::CHAR as i64))).collect()
}

/// Digits of `code` in base `p`, as scalars.
fn digits<S: Scalar>(mut code: usize, k: usize) -> Vec<S> {
    let p = S::CHAR as usize;
    (0..k)
        .map(|_| {
            let d = code % p;
            code /= p;
            S::from_i64(d as i64)
        })
        .collect()
}

/// The semisimple quotient `End / rad End`, with lifts of a basis.
struct EndQuotient<S: Scalar> {
    end: Vec<Vec<Mat<S>>>,
    /// coordinates in `end` of lifts of a basis of the quotient
    lifts: Vec<Vec<S>>,
    /// reduction modulo the radical in `end` coordinates
    rad: Span<S>,
    qbasis: Vec<usize>,
}

impl<S: Scalar> EndQuotient<S> {
    fn new(m: &GradedModule<S>, end: &HomSpace<S>) -> Self {
        let basis: Vec<Vec<Mat<S>>> = end.basis.iter().map(|f| f.maps.clone()).collect();
        let k = basis.len();
        let rad = Span::from_vectors(k, algebra_radical(&basis, m.dim()));
        let qbasis = rad.quotient_basis();
        let lifts = qbasis.iter().map(|&j| crate::linalg::unit_vec(k, j)).collect();
        EndQuotient { end: basis, lifts, rad, qbasis }
    }

    fn dim(&self) -> usize {
        self.qbasis.len()
    }

    /// Coordinates in `end` of a product of two endomorphisms.
    fn product_coords(&self, coords: &Span<S>, x: &[S], y: &[S]) -> Vec<S> {
        let a = combine_blocks(&self.end, x);
        let b = combine_blocks(&self.end, y);
        let ab: Vec<S> = a.iter().zip(&b).flat_map(|(u, v)| u.mul(v).as_slice().to_vec()).collect();
        coords.coords_inserted(&ab).expect("End is closed under composition")
    }

    /// Whether the quotient is a field, i.e. the module is indecomposable.
    fn is_field(&self, coords: &Span<S>) -> bool {
        let q = self.dim();
        if q <= 1 {
            return q == 1;
        }
        let red = |v: &[S]| self.rad.quotient_coords(v, &self.qbasis);
        // commutative
        for i in 0..q {
            for j in i + 1..q {
                let ij = red(&self.product_coords(coords, &self.lifts[i], &self.lifts[j]));
                let ji = red(&self.product_coords(coords, &self.lifts[j], &self.lifts[i]));
                if ij != ji {
                    return false;
                }
            }
        }
        // a commutative semisimple algebra is a field iff Frob - id has a 1-dim kernel
        let p = S::CHAR as u64;
        let mut cols = Vec::with_capacity(q);
        for i in 0..q {
            let mut acc = self.lifts[i].clone();
            let mut base = self.lifts[i].clone();
            let mut first = true;
            let mut e = p;
            let mut result: Option<Vec<S>> = None;
            while e > 0 {
                if e & 1 == 1 {
                    result = Some(match result {
                        None => base.clone(),
                        Some(r) => self.product_coords(coords, &r, &base),
                    });
                }
                e >>= 1;
                if e > 0 {
                    base = self.product_coords(coords, &base, &base);
                }
                first = false;
            }
            let _ = first;
            acc = result.unwrap_or(acc);
            let mut v = red(&acc);
            v[i] -= S::one();
            cols.push(v);
        }
        Mat::from_cols(&cols, q).kernel().len() == 1
    }
}

fn end_coords<S: Scalar>(end: &HomSpace<S>) -> Span<S> {
    let n: usize = end.basis.first().map_or(0, |f| f.maps.iter().map(|m| m.rows() * m.cols()).sum());
    let mut s = Span::tracking(n);
    for f in &end.basis {
        s.insert(f.maps.iter().flat_map(|m| m.as_slice().to_vec()).collect());
    }
    s
}

impl<S: Scalar> GradedModule<S> {
    pub fn endomorphisms(&self) -> Result<HomSpace<S>> {
        hom_space(self, self)
    }

    /// Exact test: `End(M)` is local.
    pub fn is_indecomposable(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let end = self.endomorphisms().expect("same ambient");
        let q = EndQuotient::new(self, &end);
        q.is_field(&end_coords(&end))
    }

    /// `f^N` for `N >= dim M`.
    fn stable_power(&self, f: &Morphism<S>) -> Morphism<S> {
        let mut g = f.clone();
        let mut k = 1;
        while k < self.dim() {
            g = g.then(&g, self, self, self);
            k *= 2;
        }
        g
    }

    /// Splits `M = ker f^N (+) im f^N` when both are nonzero.
    fn fitting_pair(&self, f: &Morphism<S>) -> Option<(Submodule<S>, Submodule<S>)> {
        let g = self.stable_power(f);
        let r = g.rank();
        if r == 0 || r == self.dim() {
            return None;
        }
        let im = self.image_of(&g, self, &Submodule::full(self));
        let ker = self.kernel_sub(&g);
        Some((ker, im))
    }

    /// Two-summand decomposition from complementary submodules.
    fn split_along(&self, a: &Submodule<S>, b: &Submodule<S>) -> [Summand<S>; 2] {
        let mk = |x: &Submodule<S>, other: &Submodule<S>| {
            let (module, incl) = self.sub_module(x);
            // projection onto x along other, expressed in x's basis
            let proj = Morphism {
                maps: self
                    .keys
                    .iter()
                    .enumerate()
                    .map(|(g, k)| {
                        let d = self.dims[g];
                        let xb = x.spans[g].basis();
                        let ob = other.spans[g].basis();
                        let mut cols: Vec<Vec<S>> = xb.to_vec();
                        cols.extend(ob.iter().cloned());
                        let p = Mat::from_cols(&cols, d).inverse().expect("complementary");
                        let rows = module.dim_at_key(k);
                        p.submatrix(0, 0, rows, d)
                    })
                    .collect(),
            };
            let idem = proj.then(&incl, self, &module, self);
            Summand { module, incl, proj, idem }
        };
        [mk(a, b), mk(b, a)]
    }

    /// Indecomposable summands, by Fitting decomposition of random
    /// endomorphisms. Deterministic for a given seed.
    pub fn fitting_split(&self, seed: u64) -> Result<Vec<Summand<S>>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = self.split_rec(&mut rng)?;
        debug_assert!(check_decomposition(self, &out));
        Ok(out)
    }

    fn split_rec(&self, rng: &mut ChaCha8Rng) -> Result<Vec<Summand<S>>> {
        if self.is_zero() {
            return Ok(Vec::new());
        }
        let end = self.endomorphisms()?;
        let coords = end_coords(&end);
        let q = EndQuotient::new(self, &end);
        let whole = || Summand {
            module: self.clone(),
            incl: Morphism::identity(self),
            proj: Morphism::identity(self),
            idem: Morphism::identity(self),
        };
        if q.is_field(&coords) {
            return Ok(vec![whole()]);
        }
        let k = end.dim();
        let mut found = None;
        for _ in 0..MAX_SPLIT_ATTEMPTS {
            let c = random_coeffs(rng, k);
            if let Some(pair) = self.fitting_pair(&end.combine(&c, self, self)) {
                found = Some(pair);
                break;
            }
        }
        if found.is_none() {
            let qd = q.dim();
            if (S::CHAR as usize).checked_pow(qd as u32).is_some_and(|t| t <= EXHAUSTIVE_LIMIT) {
                for code in 1..(S::CHAR as usize).pow(qd as u32) {
                    let d: Vec<S> = digits(code, qd);
                    let mut c = vec![S::zero(); k];
                    for (l, &dl) in q.lifts.iter().zip(&d) {
                        crate::linalg::axpy(&mut c, dl, l);
                    }
                    if let Some(pair) = self.fitting_pair(&end.combine(&c, self, self)) {
                        found = Some(pair);
                        break;
                    }
                }
            }
        }
        let Some((a, b)) = found else {
            return Err(Error::SplitFailedRetry(MAX_SPLIT_ATTEMPTS));
        };
        let mut out = Vec::new();
        for part in self.split_along(&a, &b) {
            for inner in part.module.split_rec(rng)? {
                let incl = inner.incl.then(&part.incl, &inner.module, &part.module, self);
                let proj = part.proj.then(&inner.proj, self, &part.module, &inner.module);
                let idem = proj.then(&incl, self, &inner.module, self);
                out.push(Summand { module: inner.module, incl, proj, idem });
            }
        }
        Ok(out)
    }

    /// An isomorphism `self -> other`, or `None` when none exists.
    pub fn is_isomorphic(&self, other: &GradedModule<S>, seed: u64) -> Result<Option<Morphism<S>>> {
        self.amb.require_same(&other.amb)?;
        if self.keys != other.keys || self.dims != other.dims {
            return Ok(None);
        }
        if self.is_zero() {
            return Ok(Some(Morphism::identity(self)));
        }
        let h = hom_space(self, other)?;
        if h.dim() == 0 || hom_space(other, self)?.dim() == 0 {
            return Ok(None);
        }
        self.find_iso(other, &h, seed)
    }

    /// Searches a given hom space for an invertible element.
    pub fn find_iso(&self, other: &GradedModule<S>, h: &HomSpace<S>, seed: u64) -> Result<Option<Morphism<S>>> {
        let k = h.dim();
        if k == 0 {
            return Ok(None);
        }
        let iso = |c: &[S]| {
            let f = h.combine(c, self, other);
            f.is_iso(self, other).then_some(f)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..k {
            if let Some(f) = iso(&crate::linalg::unit_vec(k, i)) {
                return Ok(Some(f));
            }
        }
        for _ in 0..MAX_SPLIT_ATTEMPTS {
            if let Some(f) = iso(&random_coeffs(&mut rng, k)) {
                return Ok(Some(f));
            }
        }
        let p = S::CHAR as usize;
        if k <= 4 || p.checked_pow(k as u32).is_some_and(|t| t <= EXHAUSTIVE_LIMIT) {
            for code in 1..p.pow(k as u32) {
                if let Some(f) = iso(&digits(code, k)) {
                    return Ok(Some(f));
                }
            }
            return Ok(None);
        }
        Err(Error::Inconclusive)
    }
}

/// Checks `sum e_i = id` and `e_i e_j = delta_ij e_i`.
pub fn check_decomposition<S: Scalar>(m: &GradedModule<S>, parts: &[Summand<S>]) -> bool {
    let mut total = Morphism::zero(m, m);
    for (i, a) in parts.iter().enumerate() {
        if !a.idem.is_morphism(m, m) {
            return false;
        }
        total = total.add(&a.idem);
        for (j, b) in parts.iter().enumerate() {
            let ab = b.idem.then(&a.idem, m, m, m);
            let want = if i == j { a.idem.clone() } else { Morphism::zero(m, m) };
            if ab != want {
                return false;
            }
        }
    }
    total == Morphism::identity(m)
}
