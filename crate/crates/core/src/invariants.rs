//! Cross-module invariants as property tests.

use proptest::prelude::*;

use crate::dualstair::{e_class_gram, e_class_push_f, e_class_push_p, BlockContext};
use crate::grcore::{cyclic_shift, decode_binary, encode_binary, enumerate_box, BoxSpec, Diagram};
use crate::homcalc::{GrContext, TwistedIrred};
use crate::kclass::{chi, chi_g, kapranov_coordinates, EqKClass};
use crate::pathblocks::{enumerate_paths, parse_path};

fn diagram_in(w: usize, h: usize) -> impl Strategy<Value = Diagram> {
    prop::collection::vec(0..=w as i64, h).prop_map(|mut v| {
        v.sort_by(|a, b| b.cmp(a));
        Diagram::new(v).unwrap()
    })
}

fn boxed() -> impl Strategy<Value = (BoxSpec, Diagram)> {
    (0usize..6, 0usize..6).prop_flat_map(|(w, h)| diagram_in(w, h).prop_map(move |d| (BoxSpec::new(w, h), d)))
}

fn grassmannian() -> impl Strategy<Value = GrContext> {
    (3i64..=6).prop_flat_map(|n| (1..n).prop_map(move |k| GrContext::new(k, n).unwrap()))
}

fn irred_on(x: GrContext) -> impl Strategy<Value = TwistedIrred> {
    (diagram_in(3, x.k()), diagram_in(2, x.q_rank()), -2i64..=2).prop_map(|(u, q, t)| TwistedIrred::new(u, q, t))
}

proptest! {
    #[test]
    fn codec_round_trip((bx, d) in boxed(), steps in -12i64..12) {
        let word = encode_binary(&d, bx).unwrap();
        prop_assert_eq!(decode_binary(&word, bx).unwrap(), d.clone());
        let shifted = cyclic_shift(&d, bx, steps).unwrap();
        prop_assert_eq!(encode_binary(&shifted, bx).unwrap(), word.rotate(steps));
        prop_assert_eq!(cyclic_shift(&shifted, bx, -steps).unwrap(), d);
    }

    #[test]
    fn twisted_irred_text_round_trip((x, a) in grassmannian().prop_flat_map(|x| (Just(x), irred_on(x)))) {
        let back: TwistedIrred = a.to_string().parse().unwrap();
        prop_assert_eq!(&back, &a);
        let n = a.normalize(&x).unwrap();
        prop_assert_eq!(EqKClass::class_of(x, &n).unwrap(), EqKClass::class_of(x, &a).unwrap());
    }

    #[test]
    fn class_json_round_trip((x, a, b) in grassmannian().prop_flat_map(|x| (Just(x), irred_on(x), irred_on(x)))) {
        let c = EqKClass::class_of(x, &a).unwrap().add_scaled(&EqKClass::class_of(x, &b).unwrap(), -3).unwrap();
        let s = serde_json::to_string(&c.to_json()).unwrap();
        prop_assert_eq!(EqKClass::from_json(x, &s).unwrap(), c);
    }

    /// χ computed pairwise from Ext tables equals χ of the K-classes and is fixed by Kapranov coordinates.
    #[test]
    fn chi_descends_to_k((x, a, b) in grassmannian().prop_flat_map(|x| (Just(x), irred_on(x), irred_on(x)))) {
        let (ca, cb) = (EqKClass::class_of(x, &a).unwrap(), EqKClass::class_of(x, &b).unwrap());
        prop_assert_eq!(chi(&ca, &cb).unwrap(), x.euler_chi(&a, &b).unwrap());
        prop_assert_eq!(chi_g(&ca, &cb).unwrap(), x.euler_chi_g(&a, &b).unwrap());
        let ext = x.ext_graded(&a, &b).unwrap();
        prop_assert_eq!(ext.euler_characteristic(), x.euler_chi(&a, &b).unwrap());
        let ka = kapranov_coordinates(&ca).unwrap();
        prop_assert_eq!(ka.coords.len(), enumerate_box(BoxSpec::new(x.q_rank(), x.k())).len());
    }
}

#[test]
fn paths_round_trip_through_text() {
    for (k, n) in [(2, 4), (2, 5), (3, 6)] {
        let x = GrContext::new(k, n).unwrap();
        for p in enumerate_paths(&x) {
            assert_eq!(parse_path(&x, &p.to_string()).unwrap(), p);
        }
    }
}

#[test]
fn e_classes_on_gr_2_6() {
    let x = GrContext::new(2, 6).unwrap();
    for w in 1..4 {
        let bc = BlockContext::new(x, w, 1).unwrap();
        for (l, m) in bc.pairs() {
            let g = e_class_gram(&bc, &l, &m).unwrap();
            let (p, cp) = e_class_push_p(&bc, &l, &m).unwrap();
            let (f, cf) = e_class_push_f(&bc, &l, &m).unwrap();
            assert!(cp.passed() && cf.passed());
            assert_eq!(g, p);
            assert_eq!(g, f);
        }
    }
}
