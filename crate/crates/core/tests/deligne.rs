use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use weilkit::counting::isogeny_atlas;
use weilkit::deligne::{
    check_real_structure_from_isomorphism, duality_involution, hensel_split_mod_pk, real_fixed_module,
    DeligneModule, PolarizedReal,
};
use weilkit::exact::RatMat;
use weilkit::symplectic::Lattice;
use weilkit::weil::{GuardConfig, WeilContext};

/// Atlas entries for `n = 1` as polarized modules with real structure `tau_0`.
fn atlas_modules(q: i64) -> Vec<PolarizedReal> {
    let q = BigInt::from(q);
    let ctx = WeilContext::new(&q, 1).unwrap();
    let half = RatMat::from_rows(vec![
        vec![BigRational::one(), BigRational::from_integer(0.into())],
        vec![BigRational::new(1.into(), 2.into()), BigRational::one()],
    ])
    .unwrap();
    isogeny_atlas(1, &q, &GuardConfig::default())
        .unwrap()
        .into_iter()
        .map(|e| {
            let g = e.gamma.gamma().clone();
            let basis = if g.is_integral() { RatMat::identity(2) } else { half.clone() };
            let base = DeligneModule::new(ctx.clone(), Lattice::new(&basis).unwrap(), g).unwrap();
            PolarizedReal::new(base, RatMat::standard_j(1)).with_tau(RatMat::standard_tau(1))
        })
        .collect()
}

const QS: [i64; 9] = [2, 3, 4, 5, 7, 8, 9, 11, 13];

#[test]
fn duality_is_an_involution() {
    for q in QS {
        for pr in atlas_modules(q) {
            let d = duality_involution(&pr).unwrap();
            assert!(d.validate().passed(), "{:?}", d.validate().failures());
            assert_eq!(duality_involution(&d).unwrap(), pr);
        }
    }
}

#[test]
fn tau_is_a_real_structure_from_isomorphism() {
    for q in QS {
        for pr in atlas_modules(q) {
            let tau = pr.tau.clone().unwrap();
            assert!(check_real_structure_from_isomorphism(&pr, &tau).unwrap());
            let minus = tau.scale(&-BigRational::one());
            assert!(check_real_structure_from_isomorphism(&pr, &minus).unwrap());
            assert!(check_real_structure_from_isomorphism(&pr, &RatMat::identity(2)).is_err());
        }
    }
}

#[test]
fn fixed_module_has_the_real_counterpart() {
    for q in QS {
        for pr in atlas_modules(q) {
            let m = real_fixed_module(&pr).unwrap();
            let chi = pr.base.charpoly().unwrap().to_int().unwrap();
            let h = weilkit::weil::real_counterpart(&chi, &BigInt::from(q)).unwrap();
            assert_eq!(m.a.charpoly().unwrap(), h.to_rat());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn hensel_split(qi in 0usize..QS.len(), pick in 0usize..64, k in 1u32..=6) {
        let mods = atlas_modules(QS[qi]);
        let pr = &mods[pick % mods.len()];
        let s = hensel_split_mod_pk(&pr.base, pr.tau.as_ref(), k).unwrap();
        let p = pr.base.ctx().p().clone();
        prop_assert_eq!(s.rank, 1);
        prop_assert_eq!(&s.modulus, &p.pow(k));
        let e2 = (&s.e * &s.e).reduce_mod(&s.modulus);
        prop_assert_eq!(&e2, &s.e);
        prop_assert!(s.e.trace().mod_floor(&p) == BigInt::one());
    }
}
