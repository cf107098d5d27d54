use std::sync::Arc;

use num_traits::{One, Zero};

use super::*;
use crate::coeff::BaseAlgebra;
use crate::field::F3;
use crate::gradedmod::Grading;
use crate::induction;
use crate::rootdata::{build_gl, LeviSpec};
use crate::structure::{levi_simple_head, simple_head};
use crate::weyl::{leq_coset, Window};

fn amb(n: usize, levi: Vec<usize>, base: BaseAlgebra<F3>) -> Arc<Ambient<F3>> {
    let datum = Arc::new(build_gl(n, 3).unwrap());
    let levi = LeviSpec::new(&datum, levi).unwrap();
    Ambient::standard(datum, levi, Arc::new(base), SubalgebraSpec::Full).unwrap()
}

fn field(n: usize, levi: Vec<usize>) -> Arc<Ambient<F3>> {
    amb(n, levi, BaseAlgebra::zero_field(n))
}

fn dual_gl2(levi: Vec<usize>) -> Arc<Ambient<F3>> {
    let e = (F3::zero(), F3::one());
    amb(2, levi, BaseAlgebra::dual_numbers(vec![e, e]))
}

fn w(c: &[i32]) -> Weight {
    Weight::new(c)
}

/// The ambient `C_{DA}` with the same `chi`.
fn d_ambient(a: &Ambient<F3>) -> Arc<Ambient<F3>> {
    let t = tau(&a.datum, &a.levi).unwrap();
    a.with_base(Arc::new(a.base.derived(Derived::D, Some(&t)).unwrap())).unwrap()
}

fn samples(a: &Arc<Ambient<F3>>) -> Vec<GradedModule<F3>> {
    let mut out = Vec::new();
    for l in [[0, 0], [1, 0], [2, -1]] {
        out.push(induction::baby_verma(a, &w(&l)).module);
        if a.base.is_field() {
            out.push(simple_head(a, &w(&l)).unwrap());
        }
    }
    out
}

#[test]
fn dual_hom_negates_grades() {
    for a in [field(2, vec![]), field(2, vec![0]), dual_gl2(vec![0])] {
        for m in samples(&a) {
            let d = dual_hom(&m).unwrap();
            assert!(d.is_valid(), "{:?}", d.validate());
            assert_eq!(d.ambient().chi, a.chi.iter().map(|c| (-c).rem_euclid(3)).collect::<Vec<_>>());
            for (g, k) in m.keys().iter().enumerate() {
                assert_eq!(d.dim_at_key(&d.ambient().key(&-*k)), m.dims()[g]);
            }
            assert_eq!(dual_hom(&d).unwrap(), m);
        }
    }
}

#[test]
fn twist_round_trip() {
    for a in [field(2, vec![]), field(2, vec![0]), field(3, vec![0]), dual_gl2(vec![0])] {
        let z = induction::baby_verma(&a, &Weight::zero(a.datum.d)).module;
        let t = tau_twist(&z).unwrap();
        assert!(t.is_valid(), "{:?}", t.validate());
        assert_eq!(tau_untwist(&t).unwrap(), z);
        assert_eq!(tau_twist(&tau_untwist(&z).unwrap()).unwrap(), z);
    }
}

#[test]
fn twisted_baby_verma_grading() {
    for a in [field(2, vec![0]), field(3, vec![0])] {
        let lam = if a.datum.d == 2 { w(&[2, 0]) } else { w(&[1, 0, -1]) };
        let z = induction::baby_verma(&a, &lam).module;
        let tz = tau_twist(&z).unwrap();
        for k in tz.keys() {
            assert!(leq_coset(&a.datum, &a.levi, &-lam, k), "{k}");
        }
    }
}

#[test]
fn twisted_toral_action() {
    let a = dual_gl2(vec![0]);
    let t = tau(&a.datum, &a.levi).unwrap();
    let z = induction::baby_verma(&a, &w(&[1, 0])).module;
    let tz = tau_twist(&z).unwrap();
    for (g, k) in z.keys().iter().enumerate() {
        let tg = tz.grade_index(&tz.ambient().key(&t.on_weight(k))).unwrap();
        for j in 0..a.datum.d {
            let mut want = Mat::zeros(z.dims()[g], z.dims()[g]);
            for i in 0..a.datum.d {
                want.axpy(F3::from_i64(t.h_inv[i][j]), &z.toral(g, i));
            }
            assert_eq!(tz.toral(tg, j), want);
        }
    }
}

#[test]
fn d_keeps_chi_and_uses_derived_base() {
    for a in [field(2, vec![]), field(2, vec![0]), field(3, vec![0]), dual_gl2(vec![0])] {
        let z = induction::baby_verma(&a, &Weight::zero(a.datum.d)).module;
        let d = dual_d(&z).unwrap();
        assert_eq!(**d.ambient(), *d_ambient(&a));
        assert!(d.is_valid());
    }
}

#[test]
fn biduality_on_free_modules() {
    for a in [field(2, vec![]), field(2, vec![0]), dual_gl2(vec![]), dual_gl2(vec![0])] {
        for m in samples(&a).into_iter().filter(|m| m.is_free()) {
            let (dd, f) = biduality(&m).unwrap();
            assert_eq!(dd, m);
            assert!(f.is_iso(&m, &dd));
            assert_eq!(dual_d(&dual_dbar(&m).unwrap()).unwrap(), m);
        }
    }
    let a = dual_gl2(vec![0]);
    let z = induction::baby_verma(&a, &w(&[0, 0])).module;
    let res = crate::gradedmod::BaseChange::residue(a.base.clone());
    let reduced = z.base_change(&res).unwrap();
    assert!(reduced.is_free());
}

#[test]
fn simples_are_self_dual() {
    for levi in [vec![], vec![0]] {
        let a = field(2, levi);
        let da = d_ambient(&a);
        for lam in Window::new(2, -2, 2).points() {
            let l = simple_head(&a, &lam).unwrap();
            let dl = dual_d(&l).unwrap();
            let want = simple_head(&da, &lam).unwrap();
            assert!(dl.is_isomorphic(&want, 1).unwrap().is_some(), "{lam}");
        }
    }
}

#[test]
fn levi_baby_vermas_are_self_dual() {
    for a in [field(2, vec![0]), field(3, vec![0])] {
        let la = a.with_spec(SubalgebraSpec::Levi);
        let da = d_ambient(&la);
        for lam in Window::new(a.datum.d, 0, 1).points() {
            let z = induction::levi_baby_verma(&a, &lam).module;
            let dz = dual_d(&z).unwrap();
            assert_eq!(**dz.ambient(), *da);
            let want = induction::levi_baby_verma(&da, &lam).module;
            assert!(dz.is_isomorphic(&want, 1).unwrap().is_some(), "{lam}");
            let l = levi_simple_head(&la, &lam).unwrap();
            assert!(dual_d(&l).unwrap().is_isomorphic(&levi_simple_head(&da, &lam).unwrap(), 1).unwrap().is_some());
        }
    }
}

#[test]
fn antiequivalence_on_samples() {
    for a in [field(2, vec![]), field(2, vec![0])] {
        let r = check_antiequivalence(&samples(&a), 5).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.pairs, 36);
        assert!(r.compositions > 0 && r.maps_checked > 0);
    }
    let s = samples(&dual_gl2(vec![0]));
    assert_eq!(check_antiequivalence(&s, 5).unwrap_err(), Error::NeedsField);
}

#[test]
fn socles_and_heads() {
    let a = field(2, vec![]);
    for lam in Window::new(2, -1, 1).points() {
        let z = induction::baby_verma(&a, &lam).module;
        let s = socle(&z).unwrap();
        assert!(s.is_simple());
        assert_eq!(crate::gradedmod::hom_space(&s, &z).unwrap().dim(), 1);
        let (h, _) = z.head();
        let back = dual_d(&socle(&dual_dbar(&z).unwrap()).unwrap()).unwrap();
        assert!(h.is_isomorphic(&back, 1).unwrap().is_some());
    }
}

#[test]
fn twist_of_borel_module_is_over_opposite_part() {
    let a = field(2, vec![]);
    let l = induction::lambda_object(&a, &w(&[1, 0])).inflate_spec(SubalgebraSpec::Borel).unwrap();
    assert_eq!(tau_twist(&l).unwrap().ambient().spec, SubalgebraSpec::LeviMinus);
    let a = field(3, vec![0]);
    let l = induction::lambda_object(&a, &w(&[1, 0, 0])).inflate_spec(SubalgebraSpec::Borel).unwrap();
    assert!(matches!(tau_twist(&l), Err(Error::WrongSubalgebra(_))));
    let a = field(3, vec![0]);
    let z = induction::levi_baby_verma(&a, &w(&[0, 0, 0])).module.inflate_spec(SubalgebraSpec::LeviPlus).unwrap();
    assert_eq!(tau_twist(&z).unwrap().ambient().spec, SubalgebraSpec::LeviMinus);
    let x = field(2, vec![0]).with_grading(Grading::X);
    let zx = induction::lambda_object(&x, &w(&[1, 0]));
    assert_eq!(tau_untwist(&tau_twist(&zx).unwrap()).unwrap(), zx);
}
