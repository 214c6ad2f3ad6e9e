use std::sync::Arc;

use proptest::prelude::*;

use almostfin::almostrep::{amplify, build_from_folner, folner_build, tensor, verify, AlmostRep};
use almostfin::carrier::{AlgebraElement, BasisWord, Carrier};
use almostfin::exactlin::{intersect, kron, Field, Mat};
use almostfin::folner::{span, ExhaustionKind, ExhaustionSpec};
use almostfin::graphlab::{gen_graph, GeneratorSpec};
use almostfin::pathology::{commutator_bound_check, finite_stable_check, witness_subspace};
use almostfin::Ratio;

const P: Field = Field::Prime(32003);

fn int_matrix(max_r: usize, max_c: usize, range: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_r, 1..=max_c).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-range..=range, c), r)
    })
}

fn square(max: usize, range: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max).prop_flat_map(move |n| prop::collection::vec(prop::collection::vec(-range..=range, n), n))
}

fn mat(f: Field, rows: &[Vec<i64>]) -> Mat {
    Mat::from_i64_rows(f, rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(rows in int_matrix(7, 7, 3)) {
        for f in [P, Field::Rational, Field::Prime(2)] {
            let m = mat(f, &rows);
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.cols(), m.cols());
            prop_assert!((&m * &k).is_zero());
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn kron_rank_is_multiplicative(a in int_matrix(4, 4, 2), b in int_matrix(4, 4, 2)) {
        let (a, b) = (mat(P, &a), mat(P, &b));
        prop_assert_eq!(kron(&a, &b).rank(), a.rank() * b.rank());
    }

    #[test]
    fn intersection_is_symmetric_and_contained(u in int_matrix(6, 4, 2), w in int_matrix(6, 4, 2)) {
        prop_assume!(u.len() == w.len());
        let (u, w) = (mat(P, &u), mat(P, &w));
        let uw = intersect(&[u.clone(), w.clone()]).unwrap();
        let wu = intersect(&[w.clone(), u.clone()]).unwrap();
        prop_assert!(uw.span_eq(&wu));
        prop_assert!(u.span_contains(&uw) && w.span_contains(&uw));
        // dim(U ∩ W) = dim U + dim W - dim(U + W)
        prop_assert_eq!(uw.rank(), u.rank() + w.rank() - u.hstack(&w).rank());
    }

    #[test]
    fn rational_and_modular_reduction_agree(rows in int_matrix(6, 6, 4)) {
        let q = mat(Field::Rational, &rows);
        let p = mat(P, &rows);
        prop_assert!(p.rank() <= q.rank());
        prop_assert_eq!(q.reduce_mod(32003).unwrap(), p.clone());
        // kernel vectors over Q with cleared denominators stay in the kernel mod p
        let k = q.kernel_basis().reduce_mod(32003).unwrap();
        prop_assert!((&p * &k).is_zero());
    }

    #[test]
    fn stable_finiteness(rows in square(8, 5)) {
        let a = mat(P, &rows);
        if let Some(b) = a.inverse() {
            let r = finite_stable_check(&a, &b).unwrap();
            prop_assert!(r.ab_identity && r.ba_identity && r.implication_ok);
            prop_assert_eq!(r.commutator_rank, 0);
        }
        let r = finite_stable_check(&a, &a.transpose()).unwrap();
        prop_assert!(r.implication_ok);
    }

    #[test]
    fn commutator_lemma(n in 2usize..=12, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        // sparse-ish entries so that TS has a non-trivial fixed space sometimes
        let mut gen = || Mat::from_fn(P, n, n, |_, _| if rng.gen_bool(0.3) { P.from_i64(rng.gen_range(-3..=3)) } else { P.zero() });
        let (t, s) = (gen(), gen());
        let r = commutator_bound_check(&t, &s).unwrap();
        prop_assert!(r.pass, "{:?}", r);
        if let Some(s_inv) = t.inverse() {
            let r = commutator_bound_check(&t, &s_inv).unwrap();
            prop_assert_eq!(r.bound, 0);
            prop_assert_eq!(r.rank_ts_minus_st, 0);
        }
    }
}

fn z2() -> Arc<Carrier> {
    Carrier::abelian(2, P)
}

fn small_element(c: &Arc<Carrier>, words: Vec<(usize, i64)>, alphabet: &[&str]) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (w, k) in words {
        let e = c.parse_element(alphabet[w % alphabet.len()]).unwrap();
        out = &out + &e.scale(&c.field().from_i64(k));
    }
    out
}

fn carriers() -> Vec<(Arc<Carrier>, Vec<&'static str>)> {
    let g = gen_graph(&GeneratorSpec::Path { n: 5 }).unwrap();
    vec![
        (z2(), vec!["1", "x", "y", "x^-1", "x*y^2", "y^-3"]),
        (Carrier::free_group(2, P), vec!["1", "a", "b", "a^-1", "a*b^-1", "b*a*b"]),
        (Carrier::free_algebra(2, Field::Rational), vec!["1", "x", "y", "x*y", "y*x", "x^2"]),
        (Carrier::translation(g, 4, P), vec!["E[0,1]", "E[1,0]", "E[2,2]", "E[1,3]", "E[3,4]", "E[4,0]"]),
    ]
}

fn element_strategy() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..6, -3i64..=3), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn associativity_and_unit(a in element_strategy(), b in element_strategy(), c in element_strategy()) {
        for (car, alpha) in carriers() {
            let (x, y, z) = (small_element(&car, a.clone(), &alpha), small_element(&car, b.clone(), &alpha), small_element(&car, c.clone(), &alpha));
            let l = car.mul(&car.mul(&x, &y).unwrap(), &z).unwrap();
            let r = car.mul(&x, &car.mul(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(l, r);
            prop_assert_eq!(car.mul(&car.one(), &x).unwrap(), x.clone());
            prop_assert_eq!(car.mul(&x, &car.one()).unwrap(), x.clone());
            // distributivity
            let s = &y + &z;
            prop_assert_eq!(car.mul(&x, &s).unwrap(), &car.mul(&x, &y).unwrap() + &car.mul(&x, &z).unwrap());
        }
    }

    #[test]
    fn literals_round_trip(a in element_strategy()) {
        for (car, alpha) in carriers() {
            let x = small_element(&car, a.clone(), &alpha);
            prop_assert_eq!(car.parse_element(&car.format_element(&x)).unwrap(), x);
        }
    }

    #[test]
    fn echelon_span_invariants(gens in prop::collection::vec(element_strategy(), 0..6)) {
        let c = z2();
        let alpha = ["1", "x", "y", "x^-1", "x*y^2", "y^-3"];
        let elems: Vec<_> = gens.into_iter().map(|g| small_element(&c, g, &alpha)).collect();
        let s = span(&c, &elems).unwrap();
        for e in &elems {
            prop_assert!(s.contains(e));
            let coords = s.coords(e).unwrap();
            prop_assert_eq!(&s.combine(&coords), e);
        }
        let leads: Vec<&BasisWord> = s.leading_words().collect();
        prop_assert!(leads.windows(2).all(|w| w[0] > w[1]));
        for (i, b) in s.basis().iter().enumerate() {
            prop_assert!(b.leading().unwrap().1.is_one());
            for (j, other) in s.basis().iter().enumerate() {
                if i != j {
                    prop_assert!(b.coeff(other.leading().unwrap().0).is_none());
                }
            }
        }
    }

    #[test]
    fn witness_subspace_contains_inputs(a in element_strategy(), b in element_strategy()) {
        let c = z2();
        let alpha = ["1", "x", "y", "x^-1", "x*y^2", "y^-3"];
        let x = small_element(&c, a, &alpha);
        let y = small_element(&c, b, &alpha);
        let w = witness_subspace(&c, &[vec![x.clone()]], &[vec![y.clone()]]).unwrap();
        prop_assert!(w.contains(&c.one()) && w.contains(&x) && w.contains(&y));
        prop_assert!(w.contains(&c.mul(&x, &y).unwrap()));
    }
}

/// A Følner representation of k[Z] with a random `L ∋ 1` of small support.
fn random_kz_rep(extra: &[(i64, i64)], n: usize) -> AlmostRep {
    let c = Carrier::abelian(1, P);
    let mut gens = vec![c.one()];
    for &(e, k) in extra {
        let w = c.word(BasisWord::Exponents(vec![e])).unwrap();
        gens.push(&w.scale(&P.from_i64(k)) + &c.one());
    }
    let l = span(&c, &gens).unwrap();
    let q = ExhaustionSpec::new(ExhaustionKind::Ball).subspace(&c, n).unwrap();
    build_from_folner(&l, &q).unwrap()
}

fn kz_extra() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-2i64..=2, 1i64..=3), 0..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn folner_reps_are_sound(extra in kz_extra(), n in 1usize..6) {
        let rep = random_kz_rep(&extra, n);
        prop_assert!(rep.unit_image().is_identity());
        let rv = verify(&rep);
        prop_assert!(rv.passed());
        prop_assert!(rv.max_core.span_contains(rep.core()));
        let l = rep.source().unwrap();
        let q = ExhaustionSpec::new(ExhaustionKind::Ball).subspace(l.carrier(), n).unwrap();
        let b = folner_build(l, &q).unwrap();
        prop_assert!(rep.defect() <= b.defect_bound());
        prop_assert!(&b.projection * &b.projection == b.projection);
        prop_assert!(rep.defect() >= Ratio::from_integer(0) && rep.defect() <= Ratio::from_integer(1));
    }

    #[test]
    fn amplify_and_tensor_bounds(e1 in kz_extra(), e2 in kz_extra(), k in 1usize..3) {
        let a = random_kz_rep(&e1, 2);
        let b = random_kz_rep(&e2, 3);
        let amp = amplify(&a, k).unwrap();
        prop_assert_eq!(amp.v_dim(), k * a.v_dim());
        prop_assert!(amp.core_dim() >= k * a.core_dim());
        prop_assert!(amp.defect() <= a.defect());
        prop_assert!(verify(&amp).passed());
        let t = tensor(&a, &b).unwrap();
        let one = Ratio::from_integer(1);
        prop_assert!(one - t.defect() >= (one - a.defect()) * (one - b.defect()));
        prop_assert!(verify(&t).passed());
    }

    #[test]
    fn rep_json_round_trip(extra in kz_extra(), n in 1usize..4) {
        let rep = random_kz_rep(&extra, n);
        let back = AlmostRep::from_json(&rep.to_json().to_string()).unwrap();
        prop_assert_eq!(back.images(), rep.images());
        prop_assert_eq!(back.core(), rep.core());
        prop_assert_eq!(back.table(), rep.table());
        prop_assert_eq!(back.unit(), rep.unit());
    }

    #[test]
    fn window_metric(side in 2usize..8, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for spec in [GeneratorSpec::Grid { side }, GeneratorSpec::Tree { degree: 3, radius: side.min(5) }, GeneratorSpec::Cycle { n: side + 3 }] {
            let g = gen_graph(&spec).unwrap();
            for _ in 0..20 {
                let (x, y, z) = (rng.gen_range(0..g.len()), rng.gen_range(0..g.len()), rng.gen_range(0..g.len()));
                prop_assert_eq!(g.distance(x, y), g.distance(y, x));
                prop_assert!(g.distance(x, z) <= g.distance(x, y) + g.distance(y, z));
                prop_assert_eq!(g.distance(x, x), 0);
            }
        }
    }
}
