use proptest::prelude::*;
use unirow::factor::{
    factor_radical_perturbation, factor_sl2_triangular, lift_word_through_quotient, project_matrix, whitehead_diagonal,
};
use unirow::finite::{enumerate_ring, quotient_by_principal};
use unirow::ideal::{divide, extended_gcd, groebner_basis, unit_ideal_witness, IdealBasis, WorkCaps};
use unirow::linalg::solve;
use unirow::parse::{parse_element, parse_ring};
use unirow::radical::{exp_radical, geom_series_inverse, is_unit, log_one_minus, reduce_to_base};
use unirow::unimodular::{complete_to_invertible, is_unimodular, transfer_through_radical};
use unirow::word::{build_elementary, classify_triangular, normalize_word, Classification, Factor, FactorWord};
use unirow::{BaseRing, Monomial, Ring, RingDescriptor, RingElement, RingMatrix, Scalar};

type RawTerm = (Vec<u16>, i64, i64);

fn raw_terms(vars: usize, max_exp: u16, max_terms: usize) -> impl Strategy<Value = Vec<RawTerm>> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, vars), -6i64..=6, 1i64..=4), 0..=max_terms)
}

fn build(ring: &Ring, raw: &[RawTerm], radical: bool) -> RingElement {
    let d = ring.geometric_vars();
    let terms = raw.iter().map(|(e, n, den)| {
        let mut e = e.clone();
        if radical && e[d..].iter().all(|&x| x == 0) {
            e[d] = 1;
        }
        let c = ring.base().from_rational(&num_rational::BigRational::new((*n).into(), (*den).into())).unwrap();
        (Monomial(e), c)
    });
    RingElement::from_terms(ring, terms)
}

fn trunc() -> Ring {
    parse_ring("trunc(Q;2;2;3)").unwrap()
}

fn trunc_elem(radical: bool) -> impl Strategy<Value = RingElement> {
    raw_terms(4, 2, 4).prop_map(move |raw| build(&trunc(), &raw, radical))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn geometric_series_inverts(u in trunc_elem(true)) {
        let one = RingElement::one(u.ring());
        prop_assert!((&(&one - &u) * &geom_series_inverse(&u).unwrap()).is_one());
    }

    #[test]
    fn exp_inverts_log(g in trunc_elem(true)) {
        let one = RingElement::one(g.ring());
        prop_assert_eq!(&exp_radical(&log_one_minus(&g).unwrap()).unwrap() + &g, one);
    }

    #[test]
    fn exp_is_additive(a in trunc_elem(true), b in trunc_elem(true)) {
        prop_assert_eq!(
            &exp_radical(&a).unwrap() * &exp_radical(&b).unwrap(),
            exp_radical(&(&a + &b)).unwrap()
        );
    }

    #[test]
    fn units_detected_modulo_radical(a in trunc_elem(false)) {
        prop_assert_eq!(is_unit(&a), is_unit(&reduce_to_base(&a).unwrap()));
    }

    #[test]
    fn reduction_is_a_homomorphism(a in trunc_elem(false), b in trunc_elem(false)) {
        let r = |x: &RingElement| reduce_to_base(x).unwrap();
        prop_assert_eq!(r(&(&a * &b)), &r(&a) * &r(&b));
        prop_assert_eq!(r(&(&a + &b)), &r(&a) + &r(&b));
        prop_assert!(r(&RingElement::one(a.ring())).is_one());
    }

    #[test]
    fn printing_round_trips(a in trunc_elem(false), raw in raw_terms(2, 3, 4), re in -5i64..5, im in -5i64..5) {
        prop_assert_eq!(parse_element(a.ring(), &a.to_string()).unwrap(), a);
        let gauss = parse_ring("poly(Q(i);2)").unwrap();
        let g = &build(&parse_ring("poly(Q;2)").unwrap(), &raw, false).to_string();
        let z = parse_element(&gauss, &format!("({re} + {im}*i)*({g})")).unwrap();
        prop_assert_eq!(parse_element(&gauss, &z.to_string()).unwrap(), z);
        let f5 = parse_ring("poly(F5;2)").unwrap();
        let w = build(&f5, &raw, false);
        prop_assert_eq!(parse_element(&f5, &w.to_string()).unwrap(), w);
    }
}

fn poly_elem(vars: usize, max_exp: u16, max_terms: usize) -> impl Strategy<Value = RingElement> {
    raw_terms(vars, max_exp, max_terms).prop_map(move |raw| {
        let ring = RingDescriptor::poly(BaseRing::Rational, vars).unwrap();
        build(&ring, &raw, false)
    })
}

fn monomials_up_to(vars: usize, degree: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial(vec![0; vars])];
    for _ in 0..degree {
        let mut next = out.clone();
        for m in &out {
            for v in 0..vars {
                let mut e = m.0.clone();
                e[v] += 1;
                next.push(Monomial(e));
            }
        }
        next.sort();
        next.dedup();
        out = next;
    }
    out
}

/// `f` in the ideal with cofactors of degree at most `degree`, by linear algebra.
fn member_by_linear_algebra(f: &RingElement, gens: &[RingElement], degree: u32) -> bool {
    let ring = f.ring();
    let monos = monomials_up_to(ring.num_vars(), degree);
    let columns: Vec<RingElement> =
        gens.iter().flat_map(|g| monos.iter().map(move |m| g.mul_term(m, &ring.base().one()))).collect();
    let mut support: Vec<Monomial> = f.terms().iter().map(|(m, _)| m.clone()).collect();
    for c in &columns {
        support.extend(c.terms().iter().map(|(m, _)| m.clone()));
    }
    support.sort();
    support.dedup();
    let coeff = |p: &RingElement, m: &Monomial| {
        p.terms().iter().find(|(t, _)| t == m).map_or_else(|| ring.base().zero(), |(_, c)| c.clone())
    };
    let rows: Vec<Vec<Scalar>> = support.iter().map(|m| columns.iter().map(|c| coeff(c, m)).collect()).collect();
    let rhs: Vec<Scalar> = support.iter().map(|m| coeff(f, m)).collect();
    solve(ring.base(), &rows, &rhs, columns.len()).is_some()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bezout_identity(a in poly_elem(1, 4, 4), b in poly_elem(1, 4, 4)) {
        let (g, s, t) = extended_gcd(&a, &b).unwrap();
        prop_assert_eq!(&(&s * &a) + &(&t * &b), g.clone());
        if !g.is_zero() {
            prop_assert!(divide(&a, std::slice::from_ref(&g)).1.is_zero());
            prop_assert!(divide(&b, std::slice::from_ref(&g)).1.is_zero());
        }
    }

    #[test]
    fn groebner_membership_matches_linear_algebra(
        gens in prop::collection::vec(poly_elem(2, 2, 3), 1..=2),
        f in poly_elem(2, 3, 3),
        q in prop::collection::vec(poly_elem(2, 1, 2), 2),
    ) {
        let ring = f.ring().clone();
        let basis = groebner_basis(&IdealBasis::new(&ring, gens.clone()).unwrap(), &WorkCaps::default()).unwrap();
        prop_assert!(basis.satisfies_s_criterion());
        // a known member
        let member = gens.iter().zip(&q).fold(RingElement::zero(&ring), |acc, (g, c)| &acc + &(g * c));
        prop_assert!(basis.contains(&member).unwrap());
        // random f: a bounded-degree representation implies membership, and a
        // non-member has no representation at any degree
        let in_ideal = basis.contains(&f).unwrap();
        if member_by_linear_algebra(&f, &gens, 3) {
            prop_assert!(in_ideal);
        }
        if !in_ideal {
            prop_assert!(!member_by_linear_algebra(&f, &gens, 3));
        }
    }

    #[test]
    fn unit_witnesses_verify(gens in prop::collection::vec(poly_elem(2, 2, 3), 1..=3)) {
        if let Some(w) = unit_ideal_witness(&gens, &WorkCaps::default()).unwrap() {
            prop_assert!(w.holds().unwrap());
        }
    }
}

fn finite_ring() -> impl Strategy<Value = Ring> {
    prop_oneof![
        (2u64..=30).prop_map(|m| RingDescriptor::zmod(m).unwrap()),
        (prop_oneof![Just(2u64), Just(3), Just(5)], 1usize..=3).prop_map(|(p, k)| RingDescriptor::dual(p, k).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn principal_projection_is_a_homomorphism(ring in finite_ring(), pick in any::<prop::sample::Index>()) {
        let elems: Vec<RingElement> = enumerate_ring(&ring, 512).unwrap().collect();
        let a = pick.get(&elems).clone();
        let q = quotient_by_principal(&ring, &a, 512).unwrap();
        prop_assert!(q.project(&a).unwrap().is_zero());
        let mut kernel = 0;
        let mut image = std::collections::HashSet::new();
        for x in &elems {
            let px = q.project(x).unwrap();
            kernel += usize::from(px.is_zero());
            image.insert(px.clone());
            for y in elems.iter().step_by(3) {
                prop_assert_eq!(q.project(&(x + y)).unwrap(), &px + &q.project(y).unwrap());
                prop_assert_eq!(q.project(&(x * y)).unwrap(), &px * &q.project(y).unwrap());
            }
        }
        prop_assert_eq!(elems.len(), kernel * image.len());
    }
}

fn q_ring() -> Ring {
    parse_ring("field(Q)").unwrap()
}

fn q_elem() -> impl Strategy<Value = RingElement> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| parse_element(&q_ring(), &format!("{n}/{d}")).unwrap())
}

fn rand_word(size: usize) -> impl Strategy<Value = Vec<Factor>> {
    prop::collection::vec((0..size, 0..size, q_elem()), 0..10).prop_map(move |v| {
        v.into_iter()
            .filter(|(i, j, _)| i != j)
            .map(|(i, j, x)| Factor::elementary(size, i, j, x).unwrap())
            .collect()
    })
}

fn sl2_q() -> impl Strategy<Value = RingMatrix> {
    (q_elem(), q_elem(), q_elem(), any::<bool>()).prop_filter_map("a nonzero", |(a, b, c, swap)| {
        if a.is_zero() {
            return None;
        }
        let d = &(&RingElement::one(&q_ring()) + &(&b * &c)) * &unirow::radical::invert(&a).unwrap();
        let rows = if swap { vec![vec![d, c], vec![b, a]] } else { vec![vec![a, b], vec![c, d]] };
        Some(RingMatrix::new(&q_ring(), rows).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalization_preserves_product(size in 2usize..=3, factors in rand_word(3)) {
        let factors: Vec<Factor> = factors.into_iter().filter(|f| f.size() == size || size == 3).collect();
        let w = FactorWord::from_factors(&q_ring(), 3, factors).unwrap();
        let n = normalize_word(&w).unwrap();
        prop_assert!(n.verify());
        prop_assert!(n.is_alternating());
        prop_assert!(n.len() <= w.len());
        prop_assert_eq!(n.product().unwrap(), w.product().unwrap());
    }

    #[test]
    fn elementary_shape_follows_position(i in 0usize..4, j in 0usize..4, v in q_elem()) {
        prop_assume!(i != j && !v.is_zero());
        let e = build_elementary(4, i, j, v).unwrap().to_matrix();
        let c = classify_triangular(&e).unwrap();
        prop_assert_eq!(c == Classification::UpperUnipotent, i < j);
        prop_assert!(e.det().unwrap().is_one());
    }

    #[test]
    fn double_inversion(m in sl2_q(), s in q_elem()) {
        prop_assume!(!s.is_zero());
        let a = m.scale(&s);
        prop_assert_eq!(a.invert().unwrap().invert().unwrap(), a.clone());
        prop_assert!(a.mul(&a.invert().unwrap()).unwrap().is_identity());
    }

    #[test]
    fn sl2_factorization_is_short(m in sl2_q()) {
        let w = factor_sl2_triangular(&m, None).unwrap();
        prop_assert!(w.verify() && w.is_alternating() && w.len() <= 4);
    }
}

fn perturbation() -> impl Strategy<Value = RingMatrix> {
    (2usize..=3, prop::collection::vec(raw_terms(3, 1, 2), 9)).prop_map(|(m, raws)| {
        let ring = parse_ring("trunc(Q;1;2;2)").unwrap();
        let mut a = RingMatrix::identity(&ring, m);
        for i in 0..m {
            for j in 0..m {
                let v = a.get(i, j) + &build(&ring, &raws[i * 3 + j], true);
                a.set(i, j, v);
            }
        }
        a
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn radical_perturbation_words(a in perturbation()) {
        let m = a.rows();
        let w = factor_radical_perturbation(&a).unwrap();
        prop_assert!(w.verify());
        prop_assert!(w.elementary_count() <= (m + 4) * (m - 1));
        let Factor::ScalarExp { h, .. } = &w.factors()[0] else { panic!("leading scalar factor") };
        prop_assert_eq!(exp_radical(&(h * &RingElement::from_i64(a.ring(), m as i64))).unwrap(), a.det().unwrap());
    }

    #[test]
    fn whitehead_counts_blocks(vals in prop::collection::vec(q_elem(), 1..=4)) {
        prop_assume!(vals.iter().all(|v| !v.is_zero()));
        let ring = q_ring();
        let mut diag = vals.clone();
        let prod = vals.iter().fold(RingElement::one(&ring), |acc, x| &acc * x);
        diag.push(unirow::radical::invert(&prod).unwrap());
        let w = whitehead_diagonal(&RingMatrix::diagonal(&ring, &diag)).unwrap();
        let mut b = RingElement::one(&ring);
        let mut nontrivial = 0;
        for v in &vals {
            b = &b * v;
            nontrivial += usize::from(!b.is_one());
        }
        prop_assert_eq!(w.elementary_count(), 4 * nontrivial);
        prop_assert!(w.verify());
    }

    #[test]
    fn lifting_then_reducing_is_identity(raws in prop::collection::vec((0usize..2, raw_terms(1, 2, 3)), 0..6)) {
        let a = parse_ring("trunc(Q;1;1;3)").unwrap();
        let base = a.reduced().unwrap();
        let factors: Vec<Factor> = raws
            .iter()
            .map(|(pos, raw)| {
                let v = build(&base, raw, false);
                if *pos == 0 { Factor::elementary(2, 0, 1, v).unwrap() } else { Factor::elementary(2, 1, 0, v).unwrap() }
            })
            .collect();
        let w = FactorWord::from_factors(&base, 2, factors).unwrap();
        let lifted = lift_word_through_quotient(&w, &a, 1).unwrap();
        prop_assert!(lifted.verify());
        prop_assert_eq!(project_matrix(lifted.target(), 1).unwrap(), w.target().clone());
        for (f, g) in lifted.factors().iter().zip(w.factors()) {
            let (Factor::Elementary(e), Factor::Elementary(b)) = (f, g) else { panic!() };
            prop_assert_eq!(&reduce_to_base(e.value()).unwrap(), b.value());
        }
    }
}

fn trunc_row() -> impl Strategy<Value = Vec<RingElement>> {
    prop::collection::vec(raw_terms(2, 2, 3), 2..=3).prop_map(|raws| {
        let ring = parse_ring("trunc(Q;1;1;2)").unwrap();
        raws.iter().map(|r| build(&ring, r, false)).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn radical_transfer_round_trip(row in trunc_row()) {
        let t = transfer_through_radical(&row).unwrap();
        prop_assert!(t.verdicts_agree());
        prop_assert!(t.transports_verify().unwrap());
    }

    #[test]
    fn completion_has_unit_determinant(row in trunc_row()) {
        if let Ok(u) = is_unimodular(&row) {
            match complete_to_invertible(&u) {
                Ok(m) => {
                    prop_assert!(is_unit(&m.det().unwrap()));
                    for (k, a) in u.components().iter().enumerate() {
                        prop_assert_eq!(m.get(k, 0), a);
                    }
                }
                Err(e) => prop_assert!(matches!(e, unirow::Error::CompletionUnsupported(_))),
            }
        }
    }

    #[test]
    fn field_rows_agree_with_groebner(vals in prop::collection::vec(q_elem(), 1..=4)) {
        let field = is_unimodular(&vals).is_ok();
        prop_assert_eq!(field, vals.iter().any(|v| !v.is_zero()));
        let poly = parse_ring("poly(Q;1)").unwrap();
        let lifted: Vec<RingElement> = vals.iter().map(|v| parse_element(&poly, &v.to_string()).unwrap()).collect();
        prop_assert_eq!(field, unit_ideal_witness(&lifted, &WorkCaps::default()).unwrap().is_some());
    }
}
