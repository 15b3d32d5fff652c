use std::cmp::Ordering;

use proptest::prelude::*;
use proptest::test_runner::RngSeed;

use schemelab::capture::{canonical_capture, check_capture, CaptureKind};
use schemelab::coding::{
    code_point, delta_transfer_check, lex_compare, CodeKind, CodedFamily, SubsetEnumeration,
};
use schemelab::scheme::verify::{
    verify_metric_lemmas, verify_scheme_axioms, AxiomOptions, MetricOptions,
};
use schemelab::scheme::{generate_type_seq, seq_delta, Growth, Step};
use schemelab::types::{norm_class, separate, type_of, type_of_boxes, ConfigType, Tuple, Q};
use schemelab::{Error, MetricProfile, Scheme, SchemeTypeSeq};

const CAP: usize = 700;

fn steps() -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::vec((2usize..=5, 0usize..1000), 1..=3)
}

/// Roots are drawn as a fraction of the current size so every draw is valid.
fn type_seq(raw: &[(usize, usize)]) -> Option<SchemeTypeSeq> {
    let mut m = 1usize;
    let mut out = Vec::new();
    for &(pieces, r) in raw {
        let root = r % m;
        out.push(Step { pieces, root });
        m = root + pieces * (m - root);
        if m > CAP {
            return None;
        }
    }
    SchemeTypeSeq::from_steps_capped(&out, CAP).ok()
}

fn config() -> impl Strategy<Value = ConfigType> {
    prop::collection::vec(0u8..=1, 1..8).prop_map(|b| ConfigType::new(b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        failure_persistence: None,
        rng_seed: RngSeed::Fixed(0x5eed),
        ..ProptestConfig::default()
    })]

    #[test]
    fn built_schemes_satisfy_the_axioms(raw in steps()) {
        let Some(t) = type_seq(&raw) else { return Ok(()) };
        let s = Scheme::build(&t);
        let opts = AxiomOptions { cofinality_samples: 500, ..Default::default() };
        let rep = verify_scheme_axioms(&s, &opts);
        prop_assert!(rep.passed(), "{}", rep.to_text());
        prop_assert_eq!(s.domain(), t.top_size());
    }

    #[test]
    fn metric_lemmas_hold(raw in steps()) {
        let Some(t) = type_seq(&raw) else { return Ok(()) };
        let s = Scheme::build(&t);
        let rep = verify_metric_lemmas(&s, &MetricOptions { exhaustive_domain: 120, samples: 4000, seed: 3 });
        prop_assert!(rep.passed(), "{}", rep.to_text());
    }

    #[test]
    fn rho_triangle_from_the_least_point_and_delta_transfers(raw in steps(), picks in prop::collection::vec(0usize..10_000, 3)) {
        let Some(t) = type_seq(&raw) else { return Ok(()) };
        let s = Scheme::build(&t);
        let p = MetricProfile::new(&s).unwrap();
        let d = s.domain();
        let mut pts = [picks[0] % d, picks[1] % d, picks[2] % d];
        pts.sort_unstable();
        // the triangle rule only holds with the least point on the left
        let [a, b, c] = pts;
        prop_assert_eq!(p.rho(a, b), p.rho(b, a));
        prop_assert_eq!(p.rho(a, a), 0);
        prop_assert!(p.rho(a, c) <= p.rho(a, b).max(p.rho(b, c)));
        prop_assert!(p.rho(a, b) <= p.rho(a, c).max(p.rho(c, b)));
        prop_assert_eq!(p.delta(a, b), seq_delta(p.xi_seq(a), p.xi_seq(b)));
        prop_assert_eq!(p.delta(a, b), seq_delta(p.card_fn(a), p.card_fn(b)));
        prop_assert_eq!(a == b, p.delta(a, b).level().is_none());
    }

    #[test]
    fn scheme_json_round_trips(raw in steps()) {
        let Some(t) = type_seq(&raw) else { return Ok(()) };
        let s = Scheme::build(&t);
        let back = Scheme::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(back.levels(), s.levels());
        prop_assert_eq!(back.to_json(), s.to_json());
    }

    #[test]
    fn canonical_families_are_captured(raw in steps(), pick in 0usize..10_000) {
        let Some(t) = type_seq(&raw) else { return Ok(()) };
        let s = Scheme::build(&t);
        let p = MetricProfile::new(&s).unwrap();
        for l in 1..=s.rank() {
            let level = s.level(l);
            let f = &level[pick % level.len()];
            let w = canonical_capture(&p, l, f).unwrap();
            prop_assert_eq!(w.kind, CaptureKind::Captured);
            prop_assert_eq!(w.family.len(), t.pieces(l));
            // reversing the order breaks the Xi clause
            let mut rev = w.family.clone();
            rev.reverse();
            prop_assert!(check_capture(&p, &rev, l, CaptureKind::DeltaCaptured).is_err());
            // and the family is never certified one level lower
            if l > 1 {
                prop_assert!(check_capture(&p, &w.family, l - 1, CaptureKind::DeltaCaptured).is_err());
            }
        }
    }

    #[test]
    fn norm_class_is_a_flip_orbit(tau in config(), i in 0u8..=1) {
        let c = norm_class(&tau);
        prop_assert!(c.contains(&tau));
        prop_assert!(c.contains(&tau.flip(i)));
        prop_assert_eq!(&norm_class(&tau.flip(1)), &c);
        prop_assert_eq!(tau.flip(i).flip(i), tau.clone());
        prop_assert_eq!(c.representative().get(0), 0);
    }

    #[test]
    fn separating_boxes_keep_the_type(pts in prop::collection::hash_set(-50i64..50, 2..12)) {
        let mut v: Vec<i64> = pts.into_iter().collect();
        let half = v.len() / 2;
        let (l, r) = v.split_at_mut(half);
        let mut l = l[..half.min(r.len())].to_vec();
        let mut r = r[..half.min(r.len())].to_vec();
        l.sort_unstable();
        r.sort_unstable();
        let a = Tuple::<Q>::from_ints(&l).unwrap();
        let b = Tuple::<Q>::from_ints(&r).unwrap();
        let (u, w) = separate(&a, &b).unwrap();
        prop_assert!(u.contains(&a));
        prop_assert!(w.contains(&b));
        prop_assert_eq!(type_of_boxes(&u, &w), Some(type_of(&a, &b).unwrap()));
    }

    #[test]
    fn codings_order_like_delta(n in 1usize..=2, seed in 0u64..500, rank in 2usize..=3, picks in prop::collection::vec(0usize..100_000, 2)) {
        let t = match generate_type_seq(rank, Growth::RandomCoding { n, seed }, 3000) {
            Ok(t) => t,
            Err(Error::Overflow { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let s = Scheme::build(&t);
        let p = MetricProfile::new(&s).unwrap();
        let en = SubsetEnumeration::build(&t, n).unwrap();
        let (a, b) = (picks[0] % s.domain(), picks[1] % s.domain());
        for kind in [CodeKind::E, CodeKind::O, CodeKind::Xi] {
            let x = code_point(&p, &en, kind, a).unwrap();
            let y = code_point(&p, &en, kind, b).unwrap();
            let (ord, delta) = lex_compare(&x, &y).unwrap();
            let (rev, delta2) = lex_compare(&y, &x).unwrap();
            prop_assert_eq!(ord, rev.reverse());
            prop_assert_eq!(delta, delta2);
            prop_assert_eq!(delta, p.delta(a, b));
            prop_assert_eq!(ord == Ordering::Equal, a == b);
            prop_assert_eq!(x.seq.len(), s.rank() + 1);
        }
        let e = code_point(&p, &en, CodeKind::E, a).unwrap();
        let xi = code_point(&p, &en, CodeKind::Xi, a).unwrap();
        prop_assert_eq!(lex_compare(&e, &xi).unwrap_err().to_string(), Error::KindMismatch.to_string());
    }

    #[test]
    fn transfer_holds_on_random_coding_schemes(n in 1usize..=2, seed in 0u64..500) {
        let t = match generate_type_seq(3, Growth::RandomCoding { n, seed }, 3000) {
            Ok(t) => t,
            Err(Error::Overflow { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let s = Scheme::build(&t);
        let p = MetricProfile::new(&s).unwrap();
        let en = SubsetEnumeration::build(&t, n).unwrap();
        let c = delta_transfer_check(&p, &en).unwrap();
        prop_assert!(c.passed(), "{:?}", c.examples);
        let e = CodedFamily::new(&p, &en, CodeKind::E).unwrap();
        let mut seqs: Vec<&Vec<i64>> = e.points.iter().map(|q| &q.seq).collect();
        seqs.sort();
        seqs.dedup();
        prop_assert_eq!(seqs.len(), s.domain());
    }
}
