use std::sync::Arc;

use num_traits::{One, Zero};

use super::*;
use crate::coeff::BaseAlgebra;
use crate::field::F3;
use crate::gradedmod::hom_space;
use crate::rootdata::{build_gl, LeviSpec};
use crate::weyl::{dot_orbit_size_mod_p, same_orbit, Window};

fn amb(n: usize, levi: Vec<usize>, base: BaseAlgebra<F3>) -> Arc<Ambient<F3>> {
    let datum = Arc::new(build_gl(n, 3).unwrap());
    let levi = LeviSpec::new(&datum, levi).unwrap();
    Ambient::standard(datum, levi, Arc::new(base), SubalgebraSpec::Full).unwrap()
}

fn field(n: usize, levi: Vec<usize>) -> Arc<Ambient<F3>> {
    amb(n, levi, BaseAlgebra::zero_field(n))
}

/// `F_3[eps]/(eps^2)` with `pi(h_1) = pi(h_2) = eps`, so `pi(h_alpha) = 0`.
fn dual_gl2(levi: Vec<usize>) -> Arc<Ambient<F3>> {
    let e = (F3::zero(), F3::one());
    amb(2, levi, BaseAlgebra::dual_numbers(vec![e, e]))
}

fn w(c: &[i32]) -> Weight {
    Weight::new(c)
}

fn residue(m: &GradedModule<F3>) -> GradedModule<F3> {
    m.base_change(&BaseChange::residue(m.ambient().base.clone())).unwrap()
}

#[test]
fn verma_isomorphisms_are_invertible() {
    for a in [field(2, vec![0]), dual_gl2(vec![0])] {
        let t = verma_iso(&a, &w(&[0, 0]), &w(&[3, -3])).unwrap();
        assert!(t.steps.is_empty());
        assert!(t.map.is_iso(&t.source.module, &t.target.module));
        let (src, tgt, r) = reflection_map(&a, &w(&[1, 0]), 0).unwrap();
        assert_eq!(src.module, induction::baby_verma(&a, &w(&[-1, 2])).module);
        assert!(r.is_morphism(&src.module, &tgt.module));
        assert!(r.is_iso(&src.module, &tgt.module));
        for (l, m) in [([1, 0], [-1, 2]), ([2, -1], [-1, 2]), ([0, 0], [-4, 4])] {
            let v = verma_iso(&a, &w(&l), &w(&m)).unwrap();
            assert!(v.map.is_morphism(&v.source.module, &v.target.module));
            assert!(v.map.is_iso(&v.source.module, &v.target.module), "{l:?} -> {m:?}");
        }
        assert_eq!(verma_iso(&a, &w(&[1, 0]), &w(&[0, 0])).unwrap_err(), Error::NotInOrbit);
    }
    let bad = amb(2, vec![0], BaseAlgebra::dual_numbers(vec![(F3::zero(), F3::one()), (F3::zero(), F3::zero())]));
    assert_eq!(verma_iso(&bad, &w(&[0, 0]), &w(&[3, -3])).unwrap_err(), Error::LeviVanishingViolated);
}

#[test]
fn gl3_verma_isomorphisms() {
    let a = field(3, vec![0]);
    let l = w(&[2, 0, 0]);
    let m = crate::weyl::dot_reflect(&a.datum, 0, &l) + 3 * a.datum.simple(0);
    let v = verma_iso(&a, &l, &m).unwrap();
    assert!(v.map.is_iso(&v.source.module, &v.target.module));
}

#[test]
fn theta_round_trip_and_base_change() {
    let a = dual_gl2(vec![0]);
    let zero = vec![vec![F3::zero(); 2]; 2];
    let a0 = a.with_base(Arc::new(a.base.with_pi(zero))).unwrap();
    for lam in [[0, 0], [1, 0], [2, -1]] {
        let z0 = induction::baby_verma(&a0, &w(&lam)).module;
        let z = induction::baby_verma(&a, &w(&lam)).module;
        let t = theta(&z0, a.base.pi.clone()).unwrap();
        assert_eq!(t, z);
        assert!(t.is_valid());
        assert_eq!(theta_inverse(&t).unwrap(), z0);
        assert_eq!(residue(&t), residue(&z0).reambient(residue(&t).ambient().clone()));
    }
    let bad = vec![vec![F3::zero(), F3::one()], vec![F3::zero(), F3::zero()]];
    let z0 = induction::baby_verma(&a0, &w(&[0, 0])).module;
    assert_eq!(theta(&z0, bad).unwrap_err(), Error::LeviVanishingViolated);
}

#[test]
fn simple_heads() {
    let zero = field(2, vec![]);
    let dims: Vec<usize> =
        [[0, 0], [1, 0], [2, 0], [-1, 0]].iter().map(|l| simple_head(&zero, &w(l)).unwrap().dim()).collect();
    assert_eq!(dims, vec![1, 2, 3, 3]);
    let reg = field(2, vec![0]);
    for l in [[0, 0], [1, 0], [2, 0]] {
        assert_eq!(simple_head(&reg, &w(&l)).unwrap().dim(), 3);
    }
    // L(lambda) and L(mu) are isomorphic exactly when Z(lambda) and Z(mu) are
    let pts = Window::new(2, -2, 1).points();
    for x in &pts {
        for y in &pts {
            let (lx, ly) = (simple_head(&zero, x).unwrap(), simple_head(&zero, y).unwrap());
            let (zx, zy) = (induction::baby_verma(&zero, x).module, induction::baby_verma(&zero, y).module);
            assert_eq!(lx.is_isomorphic(&ly, 1).unwrap().is_some(), zx.is_isomorphic(&zy, 1).unwrap().is_some());
        }
    }
}

#[test]
fn composition_series_of_baby_vermas() {
    let zero = field(2, vec![]);
    let z = induction::baby_verma(&zero, &w(&[0, 0])).module;
    let f = z.composition_series(3).unwrap();
    assert!(f.verify(&z));
    assert_eq!(f.len(), 2);
    let factors = composition_factors(&zero, &z, 3).unwrap();
    assert_eq!(factors.values().sum::<usize>(), 2);
    assert!(factors.contains_key(&w(&[0, 0])));
    let g = z.composition_series(11).unwrap();
    assert_eq!(composition_factors(&zero, &z, 11).unwrap(), factors);
    assert_eq!(g.len(), 2);
}

#[test]
fn levi_projective_dimension_formula() {
    let a = field(2, vec![0]);
    assert_eq!(projective_cover_levi(&a, &w(&[0, 0]), 1).unwrap().dim(), 6);
    assert_eq!(projective_cover_levi(&a, &w(&[-1, 0]), 1).unwrap().dim(), 3);
    let a = field(3, vec![0]);
    for lam in [[0, 0, 0], [1, 0, 0], [2, 0, 1], [-1, 0, 0]] {
        let q = projective_cover_levi(&a, &w(&lam), 1).unwrap();
        assert_eq!(q.dim(), 3 * dot_orbit_size_mod_p(&a.datum, &[0], &w(&lam)), "{lam:?}");
        assert!(q.is_indecomposable());
    }
}

#[test]
fn levi_projective_over_dual_numbers() {
    let a = dual_gl2(vec![0]);
    let q = projective_cover_levi(&a, &w(&[0, 0]), 1).unwrap();
    assert!(q.is_valid());
    assert!(q.is_free());
    assert_eq!(q.rank_over_base(), Some(6));
    let qf = projective_cover_levi(&field(2, vec![0]), &w(&[0, 0]), 1).unwrap();
    let red = residue(&q);
    assert!(red.is_isomorphic(&qf.reambient(red.ambient().clone()), 1).unwrap().is_some());
}

#[test]
fn q_upper_and_xi() {
    let a = field(3, vec![0]);
    let q = q_upper_i(&a, &w(&[0, 0, 0]), 1).unwrap();
    assert_eq!(q.dim(), 54);
    assert!(q.is_valid());
    let z = z_filtration(&q, 1).unwrap();
    assert!(z.verify(&q));
    assert_eq!(z.len(), 2);
    for mu in &z.labels {
        assert!(same_orbit(&a.datum, &a.levi, crate::weyl::Group::WIp, mu, &w(&[0, 0, 0])));
    }
    assert_eq!(q_filtration(&q, 4).unwrap().len(), 1);
    let e = field(2, vec![]);
    for lam in [[0, 0], [1, 0]] {
        let q = q_upper_i(&e, &w(&lam), 1).unwrap();
        let z = induction::baby_verma(&e, &w(&lam)).module;
        assert!(q.is_isomorphic(&z, 1).unwrap().is_some());
    }
}

#[test]
fn xi_has_q_upper_once_at_top() {
    let a = field(3, vec![0]);
    let lam = w(&[0, 0, 0]);
    let xi = xi_i(&a, &lam, 1).unwrap();
    let mut multisets = Vec::new();
    for seed in [1, 2, 3] {
        let f = q_filtration(&xi, seed).unwrap();
        assert!(f.verify(&xi));
        assert_eq!(*f.labels.last().unwrap(), lam);
        assert_eq!(f.labels.iter().filter(|l| **l == lam).count(), 1);
        for l in &f.labels[..f.len() - 1] {
            assert!(crate::weyl::lt_coset(&a.datum, &a.levi, &lam, l));
        }
        let mut ls = f.labels.clone();
        ls.sort();
        multisets.push(ls);
    }
    assert!(multisets.windows(2).all(|p| p[0] == p[1]));
}

#[test]
fn truncation() {
    let a = field(2, vec![]);
    let lam = w(&[1, 0]);
    let z = induction::baby_verma(&a, &lam).module;
    let (t, _) = truncate(&z, &lam);
    assert_eq!(t, z);
    let phi = induction::phi(&induction::lambda_object(&a, &lam)).unwrap().module;
    let (t, p) = truncate(&phi, &lam);
    assert_eq!(t.dim(), 3);
    assert!(p.is_morphism(&phi, &t));
    let n = induction::baby_verma(&a, &w(&[0, 1])).module;
    assert_eq!(hom_space(&t, &n).unwrap().dim(), hom_space(&phi, &n).unwrap().dim());
}

#[test]
fn z_filtration_of_phi() {
    let a = field(2, vec![]);
    let lam = w(&[0, 0]);
    let phi = induction::phi(&induction::lambda_object(&a, &lam)).unwrap().module;
    let f = z_filtration(&phi, 1).unwrap();
    assert!(f.verify(&phi));
    let alpha = a.datum.root(0);
    let mut labels = f.labels.clone();
    labels.sort();
    let mut expect: Vec<Weight> = (0..3).map(|k| lam + k * alpha).collect();
    expect.sort();
    assert_eq!(labels, expect);
    for nu in [w(&[0, 0]), w(&[1, -1])] {
        let g = sort_z_filtration(&phi, &nu, 1).unwrap();
        assert!(z_order_holds(&g, &phi, &nu));
    }
}

#[test]
fn projective_covers_over_fields() {
    let reg = field(2, vec![0]);
    let q = projective_cover(&reg, &w(&[0, 0]), 1).unwrap();
    assert_eq!(q.dim(), 6);
    let zero = field(2, vec![]);
    let q = projective_cover(&zero, &w(&[0, 0]), 1).unwrap();
    let z = z_filtration(&q, 1).unwrap();
    assert_eq!(q.dim(), 3 * z.len());
    assert_eq!(z.len(), 2);
    let l = simple_head(&zero, &w(&[0, 0])).unwrap();
    assert_eq!(hom_space(&q, &l).unwrap().dim(), 1);
}

#[test]
fn projective_cover_lifts() {
    for levi in [vec![], vec![0]] {
        let a = dual_gl2(levi.clone());
        let lam = w(&[0, 0]);
        let q = projective_cover(&a, &lam, 1).unwrap();
        assert!(q.is_free());
        let qf = projective_cover(&field(2, levi), &lam, 1).unwrap();
        let red = residue(&q);
        assert!(red.is_isomorphic(&qf.reambient(red.ambient().clone()), 1).unwrap().is_some());
    }
}

#[test]
fn reciprocity_gl2() {
    for levi in [vec![], vec![0]] {
        let a = field(2, levi);
        let win = Window::new(2, -1, 1);
        let qqi = multiplicities(&a, MultKind::QQI, &win, 1).unwrap();
        let tau = crate::rootdata::tau(&a.datum, &a.levi).unwrap();
        let da = a.with_base(Arc::new(a.base.derived(crate::coeff::Derived::D, Some(&tau)).unwrap())).unwrap();
        let zl = multiplicities(&da, MultKind::ZL, &win, 1).unwrap();
        for l in &qqi.reps {
            assert_eq!(qqi.get(l, l), 1);
            for m in &qqi.reps {
                assert_eq!(qqi.get(l, m), zl.get(l, m), "{l} {m}");
                if qqi.get(l, m) > 0 {
                    assert!(crate::weyl::leq_coset(&a.datum, &a.levi, l, m));
                }
            }
        }
    }
}

#[test]
fn iso_criterion_small() {
    for levi in [vec![], vec![0]] {
        let a = field(2, levi);
        let r = verify_iso_criterion(&a, &Window::new(2, -2, 2), 1).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
        assert_eq!(r.pairs, 25 * 24 / 2);
    }
}

#[test]
fn blocks_agree() {
    let a = dual_gl2(vec![0]);
    let r = verify_blocks(&a, &Window::new(2, -1, 1)).unwrap();
    assert!(r.passed());
    let f = field(2, vec![0]);
    let r = verify_blocks(&f, &Window::new(2, 0, 1)).unwrap();
    assert!(r.passed());
}

#[test]
fn multiplicity_csv_shape() {
    let a = field(2, vec![]);
    let t = multiplicities(&a, MultKind::ZL, &Window::new(2, 1, 0), 1).unwrap();
    assert_eq!(t.to_csv(), "lambda,mu,value\n");
    let t = multiplicities(&a, MultKind::ZL, &Window::new(2, 0, 1), 1).unwrap();
    assert_eq!(t.to_csv().lines().count(), 1 + 16);
}
