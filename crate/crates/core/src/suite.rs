//! Seeded randomized checks of the library against its stated properties.
//! Each criterion runs with its own deterministic RNG and reports one line.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cert::Certificate;
use crate::error::{Error, Result};
use crate::factor::{
    bound_table, factor_radical_perturbation, factor_sl2_triangular, min_triangular_length_2x2, whitehead_diagonal,
};
use crate::finite::enumerate_ring;
use crate::matrix::RingMatrix;
use crate::poly::{Monomial, RingElement};
use crate::radical::{exp_radical, geom_series_inverse, invert, log_one_minus};
use crate::ring::{Ring, RingDescriptor};
use crate::scalar::{BaseRing, Scalar};
use crate::unimodular::{
    bass_witness, brute_force_lemma26, complete_to_invertible, search_reduction_pair, transfer_through_radical,
    SearchOutcome,
};
use crate::word::{normalize_word, Factor, FactorWord, Shape};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub index: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub time_limit_ms: Option<u128>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}]: {} ({}; {} ms)",
            self.index,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail,
            self.elapsed_ms
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
    pub passed: bool,
}

pub const CRITERIA: [(usize, &str, Option<u64>); 9] = [
    (1, "radical arithmetic identities", Some(10)),
    (2, "radical perturbation count", Some(30)),
    (3, "Whitehead count", None),
    (4, "SL2 triangular factorization", None),
    (5, "merge bookkeeping and bound table", None),
    (6, "quotient criterion oracle", Some(60)),
    (7, "radical transfer", None),
    (8, "Bass witness", None),
    (9, "certificate round trip", None),
];

pub fn suite_members(name: &str) -> Result<Vec<usize>> {
    Ok(match name {
        "radical" => vec![1],
        "factorization" => vec![2, 3, 4, 5, 9],
        "unimodular" => vec![7, 8],
        "lemma26" => vec![6],
        "all" => (1..=9).collect(),
        other => return Err(Error::InvalidDescriptor(format!("unknown suite '{other}'"))),
    })
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let criteria: Vec<CriterionResult> = suite_members(name)?.into_iter().map(|i| run_criterion(i, seed)).collect();
    let passed = criteria.iter().all(|c| c.passed);
    Ok(SuiteReport { suite: name.to_string(), seed, criteria, passed })
}

/// Outcome of one check body: pass flag and a short description.
type Outcome = Result<(bool, String)>;

/// An outcome plus the words it produced, with their claimed bounds.
type Emitted = Result<(bool, String, Vec<(FactorWord, usize)>)>;

pub fn run_criterion(index: usize, seed: u64) -> CriterionResult {
    let (_, name, limit) = CRITERIA[index - 1];
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64));
    let start = Instant::now();
    let outcome: Outcome = match index {
        1 => radical_identities(&mut rng),
        2 => perturbation_words(&mut rng).map(|(ok, detail, _)| (ok, detail)),
        3 => whitehead_words(&mut rng).map(|(ok, detail, _)| (ok, detail)),
        4 => sl2_words(&mut rng).map(|(ok, detail, _)| (ok, detail)),
        5 => merge_bookkeeping(&mut rng),
        6 => lemma26_oracle(),
        7 => radical_transfer(&mut rng),
        8 => bass_family(),
        9 => certificate_round_trip(seed),
        _ => Err(Error::InvalidDimension(format!("no criterion {index}"))),
    };
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|s| elapsed <= Duration::from_secs(s));
    let (passed, mut detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    if !in_time {
        detail.push_str(&format!("; exceeded {} s", limit.unwrap()));
    }
    CriterionResult {
        index,
        name: name.to_string(),
        passed: passed && in_time,
        detail,
        elapsed_ms: elapsed.as_millis(),
        time_limit_ms: limit.map(|s| u128::from(s) * 1000),
    }
}

fn rand_rational(rng: &mut ChaCha8Rng, nonzero: bool) -> BigRational {
    loop {
        let q = BigRational::new(BigInt::from(rng.gen_range(-6i64..=6)), BigInt::from(rng.gen_range(1i64..=4)));
        if !nonzero || q != BigRational::from_integer(0.into()) {
            return q;
        }
    }
}

fn rand_scalar(rng: &mut ChaCha8Rng, base: BaseRing, nonzero: bool) -> Scalar {
    base.from_rational(&rand_rational(rng, nonzero)).expect("rational base")
}

fn rand_nilpotent_exponents(rng: &mut ChaCha8Rng, vars: usize, degree: u32) -> Vec<u16> {
    let mut e = vec![0u16; vars];
    for _ in 0..degree {
        e[rng.gen_range(0..vars)] += 1;
    }
    e
}

/// A random element of a truncated-nilpotent ring; `radical` forces every
/// term to carry a nilpotent factor.
fn rand_trunc(rng: &mut ChaCha8Rng, ring: &Ring, radical: bool, max_terms: usize, max_geo: u32) -> RingElement {
    let d = ring.geometric_vars();
    let k = ring.nilpotent_vars();
    let n = ring.truncation() as u32;
    let terms = (0..rng.gen_range(1..=max_terms))
        .map(|_| {
            let mut e: Vec<u16> = (0..d).map(|_| 0).collect();
            for _ in 0..rng.gen_range(0..=max_geo) {
                if d > 0 {
                    e[rng.gen_range(0..d)] += 1;
                }
            }
            let lo = u32::from(radical);
            let nil = rng.gen_range(lo..n.max(lo + 1));
            e.extend(rand_nilpotent_exponents(rng, k, nil.min(n - 1)));
            (Monomial(e), rand_scalar(rng, ring.base(), true))
        })
        .collect::<Vec<_>>();
    RingElement::from_terms(ring, terms)
}

fn rand_trunc_ring(rng: &mut ChaCha8Rng, max_d: usize, max_n: usize) -> Ring {
    RingDescriptor::trunc_nil(BaseRing::Rational, rng.gen_range(0..=max_d), rng.gen_range(1..=2), rng.gen_range(2..=max_n))
        .expect("valid descriptor")
}

fn radical_identities(rng: &mut ChaCha8Rng) -> Outcome {
    let samples = 1000;
    let mut failures = 0;
    for _ in 0..samples {
        let ring = rand_trunc_ring(rng, 2, 4);
        let one = RingElement::one(&ring);
        let u = rand_trunc(rng, &ring, true, 3, 2);
        if !(&(&one - &u) * &geom_series_inverse(&u)?).is_one() {
            failures += 1;
        }
        let g = rand_trunc(rng, &ring, true, 3, 2);
        if exp_radical(&log_one_minus(&g)?)? != &one - &g {
            failures += 1;
        }
    }
    Ok((failures == 0, format!("{samples} samples, {failures} failures")))
}

fn rand_radical_perturbation(rng: &mut ChaCha8Rng) -> RingMatrix {
    let ring = rand_trunc_ring(rng, 1, 3);
    let m = rng.gen_range(2..=4);
    let mut a = RingMatrix::identity(&ring, m);
    for i in 0..m {
        for j in 0..m {
            if rng.gen_bool(0.6) {
                let v = a.get(i, j) + &rand_trunc(rng, &ring, true, 2, 1);
                a.set(i, j, v);
            }
        }
    }
    a
}

fn perturbation_words(rng: &mut ChaCha8Rng) -> Emitted {
    let samples = 200;
    let mut words = Vec::with_capacity(samples);
    let mut failures = 0;
    let mut worst = 0usize;
    for _ in 0..samples {
        let a = rand_radical_perturbation(rng);
        let m = a.rows();
        let w = factor_radical_perturbation(&a)?;
        let bound = (m + 4) * (m - 1);
        let Factor::ScalarExp { h, .. } = &w.factors()[0] else {
            failures += 1;
            continue;
        };
        let mh = h * &RingElement::from_i64(a.ring(), m as i64);
        let ok = w.verify() && w.elementary_count() <= bound && exp_radical(&mh)? == a.det()?;
        failures += usize::from(!ok);
        worst = worst.max(w.elementary_count());
        words.push((w, bound));
    }
    Ok((failures == 0, format!("{samples} matrices, max {worst} elementaries, {failures} failures"), words))
}

fn rand_unit(rng: &mut ChaCha8Rng, ring: &Ring) -> RingElement {
    let c = RingElement::constant(ring, rand_scalar(rng, ring.base(), true));
    if ring.has_radical() && rng.gen_bool(0.7) {
        &c + &rand_trunc(rng, ring, true, 2, 0)
    } else {
        c
    }
}

fn whitehead_words(rng: &mut ChaCha8Rng) -> Emitted {
    let rings = [RingDescriptor::field(BaseRing::Rational)?, RingDescriptor::trunc_nil(BaseRing::Rational, 0, 1, 3)?];
    let mut words = Vec::new();
    let mut failures = 0;
    for ring in &rings {
        for _ in 0..60 {
            let m = rng.gen_range(2..=5);
            let mut diag: Vec<RingElement> = (0..m - 1).map(|_| rand_unit(rng, ring)).collect();
            let prod = diag.iter().fold(RingElement::one(ring), |acc, x| &acc * x);
            diag.push(invert(&prod)?);
            let w = whitehead_diagonal(&RingMatrix::diagonal(ring, &diag))?;
            let bound = 4 * (m - 1);
            failures += usize::from(!(w.verify() && w.elementary_count() <= bound));
            words.push((w, bound));
        }
    }
    let n = words.len();
    Ok((failures == 0, format!("{n} diagonals over Q and Q[e]/(e^3), {failures} failures"), words))
}

fn rand_sl2(rng: &mut ChaCha8Rng, ring: &Ring) -> Result<RingMatrix> {
    let el = |q: BigRational| RingElement::constant(ring, ring.base().from_rational(&q).unwrap());
    let a = rand_rational(rng, true);
    let b = if rng.gen_bool(0.8) { rand_rational(rng, false) } else { BigRational::from_integer(0.into()) };
    let c = if rng.gen_bool(0.75) { rand_rational(rng, false) } else { BigRational::from_integer(0.into()) };
    let d = (BigRational::from_integer(1.into()) + &b * &c) / &a;
    let (a, b, c, d) = if rng.gen_bool(0.5) { (a, b, c, d) } else { (d, c, b, a) };
    RingMatrix::new(ring, vec![vec![el(a), el(b)], vec![el(c), el(d)]])
}

/// Minimum alternating word length for every matrix reachable with at most
/// four triangular factors over `F_p`, by enumerating the words.
pub fn brute_force_min_lengths(ring: &Ring) -> Result<HashMap<RingMatrix, usize>> {
    let elems: Vec<RingElement> = enumerate_ring(ring, 64)?.collect();
    let mut best = HashMap::new();
    best.insert(RingMatrix::identity(ring, 2), 0);
    for len in 1..=4usize {
        for start in [Shape::Upper, Shape::Lower] {
            let mut stack: Vec<(RingMatrix, usize)> = vec![(RingMatrix::identity(ring, 2), 0)];
            while let Some((m, k)) = stack.pop() {
                if k == len {
                    best.entry(m).or_insert(len);
                    continue;
                }
                let upper = (start == Shape::Upper) == (k % 2 == 0);
                for v in &elems {
                    let mut f = RingMatrix::identity(ring, 2);
                    if upper {
                        f.set(0, 1, v.clone());
                    } else {
                        f.set(1, 0, v.clone());
                    }
                    stack.push((m.mul(&f)?, k + 1));
                }
            }
        }
    }
    Ok(best)
}

fn sl2_words(rng: &mut ChaCha8Rng) -> Emitted {
    let q = RingDescriptor::field(BaseRing::Rational)?;
    let samples = 500;
    let mut words = Vec::with_capacity(samples);
    let mut failures = 0;
    for _ in 0..samples {
        let m = rand_sl2(rng, &q)?;
        let w = factor_sl2_triangular(&m, None)?;
        let ok = w.verify() && w.len() <= 4 && w.is_alternating() && min_triangular_length_2x2(&m)? <= w.len();
        failures += usize::from(!ok);
        words.push((w, 4));
    }
    let two = RingElement::from_i64(&q, 2);
    let diag = RingMatrix::diagonal(&q, &[two.clone(), invert(&two)?]);
    let diag_len = min_triangular_length_2x2(&diag)?;
    let mut mismatches = 0;
    let mut checked = 0;
    for p in [2u64, 3] {
        let f = RingDescriptor::field(BaseRing::Modular(p))?;
        let brute = brute_force_min_lengths(&f)?;
        let elems: Vec<RingElement> = enumerate_ring(&f, 64)?.collect();
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    for d in &elems {
                        let m = RingMatrix::new(&f, vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]])?;
                        if !m.det()?.is_one() {
                            continue;
                        }
                        checked += 1;
                        if brute.get(&m) != Some(&min_triangular_length_2x2(&m)?) {
                            mismatches += 1;
                        }
                    }
                }
            }
        }
    }
    let passed = failures == 0 && diag_len == 4 && mismatches == 0 && checked == 6 + 24;
    Ok((
        passed,
        format!(
            "{samples} SL2(Q) samples, {failures} failures; min length of diag(2, 1/2) = {diag_len}; \
             {checked} matrices over F2, F3, {mismatches} mismatches"
        ),
        words,
    ))
}

fn rand_triangular(rng: &mut ChaCha8Rng, ring: &Ring, shape: Shape) -> Factor {
    let v = RingElement::constant(ring, rand_scalar(rng, ring.base(), true));
    match shape {
        Shape::Upper => Factor::elementary(2, 0, 1, v).unwrap(),
        Shape::Lower => Factor::elementary(2, 1, 0, v).unwrap(),
    }
}

fn alternating(rng: &mut ChaCha8Rng, ring: &Ring, len: usize, start: Shape) -> Vec<Factor> {
    (0..len)
        .map(|k| {
            let s = if k % 2 == 0 { start } else { flip(start) };
            rand_triangular(rng, ring, s)
        })
        .collect()
}

fn flip(s: Shape) -> Shape {
    match s {
        Shape::Upper => Shape::Lower,
        Shape::Lower => Shape::Upper,
    }
}

fn merge_bookkeeping(rng: &mut ChaCha8Rng) -> Outcome {
    let q = RingDescriptor::field(BaseRing::Rational)?;
    let samples = 300;
    let mut failures = 0;
    for _ in 0..samples {
        let l = rng.gen_range(2..=12);
        let start = if rng.gen_bool(0.5) { Shape::Upper } else { Shape::Lower };
        let mut word = alternating(rng, &q, l, start);
        // insert after position p so that both seams join equal shapes
        let p = rng.gen_range(1..l);
        let seam = word[p - 1].shape().unwrap();
        let inserted = alternating(rng, &q, 4, seam);
        word.splice(p..p, inserted);
        let w = FactorWord::from_factors(&q, 2, word)?;
        let n = normalize_word(&w)?;
        let ok = n.len() <= l + 2 && n.verify() && n.is_alternating() && n.product()? == w.product()?;
        failures += usize::from(!ok);
    }
    let mut table_failures = 0;
    for d in 1..=8u64 {
        for v in 1..=12u64 {
            let b = bound_table(d, v)?;
            let n_d = ((d as f64 / 2.0).floor() as u64 + 2) * ((v as f64 / 2.0).floor() as u64 + 3);
            let ok = b.sup_tn == v + 5
                && b.t2_reduced == v + 2
                && b.merged_sl2_word == v + 4
                && b.n_threshold == n_d
                && b.tn_beyond_threshold == 6
                && b.exact_tn_d1 == (d == 1).then_some(4)
                && b.sup_tn_d2 == (d == 2).then_some(7);
            table_failures += usize::from(!ok);
        }
    }
    Ok((
        failures == 0 && table_failures == 0,
        format!("{samples} merged words, {failures} failures; 96 bound-table cells, {table_failures} failures"),
    ))
}

fn lemma26_oracle() -> Outcome {
    let rings = ["zmod(4)", "zmod(8)", "zmod(9)", "dual(2;2)", "dual(3;2)"];
    let mut runs = 0;
    let mut instances = 0;
    let mut counterexamples = 0;
    let mut global = 0;
    for spec in rings {
        let ring = crate::parse::parse_ring(spec)?;
        let elems: Vec<RingElement> = enumerate_ring(&ring, 64)?.collect();
        for a in &elems {
            for n in 1..=2 {
                let rep = brute_force_lemma26(&ring, a, n)?;
                runs += 1;
                instances += rep.instances;
                counterexamples += rep.counterexamples.len();
                global += usize::from(!rep.equivalence_holds);
            }
        }
    }
    Ok((
        counterexamples == 0 && global == 0,
        format!("{runs} (ring, a, n) runs, {instances} rows, {counterexamples} counterexamples, {global} global failures"),
    ))
}

fn rand_base_poly(rng: &mut ChaCha8Rng, ring: &Ring, degree: u32) -> RingElement {
    let terms = (0..=degree).map(|k| (Monomial(vec![k as u16]), ring.base().from_i64(rng.gen_range(-3..=3))));
    RingElement::from_terms(ring, terms)
}

fn radical_transfer(rng: &mut ChaCha8Rng) -> Outcome {
    let samples = 300;
    let (mut unimodular, mut failures) = (0, 0);
    for _ in 0..samples {
        let ring = RingDescriptor::trunc_nil(BaseRing::Rational, 1, rng.gen_range(1..=2), rng.gen_range(2..=3))?;
        let base = ring.reduced()?;
        let n = rng.gen_range(2..=3);
        let common = if rng.gen_bool(0.4) {
            let r = rng.gen_range(-2i64..=2);
            &RingElement::x(&base, 0) - &RingElement::from_i64(&base, r)
        } else {
            RingElement::one(&base)
        };
        let row: Vec<RingElement> = (0..n)
            .map(|_| {
                let deg = rng.gen_range(0..=2);
                let f = &rand_base_poly(rng, &base, deg) * &common;
                let lifted = crate::radical::embed_from_base(&ring, &f).unwrap();
                &lifted + &rand_trunc(rng, &ring, true, 2, 1)
            })
            .collect();
        let t = transfer_through_radical(&row)?;
        unimodular += usize::from(t.base.is_some());
        failures += usize::from(!(t.verdicts_agree() && t.transports_verify()?));
    }
    Ok((failures == 0, format!("{samples} rows ({unimodular} unimodular), {failures} failures")))
}

fn bass_family() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for d in 2..=8 {
        ok &= bass_witness(d)?.verify();
    }
    notes.push("d = 2..8 witnesses verified".to_string());
    let b2 = bass_witness(2)?;
    for bound in 0..=5 {
        let infeasible = matches!(search_reduction_pair(&b2, bound)?, SearchOutcome::InfeasibleWithinBound { .. });
        ok &= infeasible;
    }
    notes.push("reduction search infeasible for D <= 5".into());
    let det = complete_to_invertible(&b2)?.det()?;
    ok &= det.is_one();
    notes.push(format!("completion det = {det}"));
    Ok((ok, notes.join("; ")))
}

fn certificate_round_trip(seed: u64) -> Outcome {
    let mut words = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    words.extend(perturbation_words(&mut rng)?.2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
    words.extend(whitehead_words(&mut rng)?.2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(4));
    words.extend(sl2_words(&mut rng)?.2);
    let mut failures = 0;
    for (w, bound) in &words {
        let cert = Certificate::from_word(w, Some(*bound));
        let text = cert.to_json();
        let back = Certificate::from_json(&text)?;
        let ok = cert.verified && back.recheck() && back.to_json() == text && back.to_word()? == *w;
        failures += usize::from(!ok);
    }
    Ok((failures == 0, format!("{} certificates, {failures} failures", words.len())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_table_covers_sl2_f2() {
        let f2 = RingDescriptor::field(BaseRing::Modular(2)).unwrap();
        let t = brute_force_min_lengths(&f2).unwrap();
        assert_eq!(t.len(), 6);
        assert_eq!(t.values().filter(|&&v| v == 3).count(), 1);
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(suite_members("bogus").is_err());
        assert_eq!(suite_members("all").unwrap().len(), 9);
    }
}
