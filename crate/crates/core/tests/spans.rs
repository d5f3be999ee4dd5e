use std::collections::BTreeMap;

use picentral::linalg::Echelon;
use picentral::normal_form::{reduce_poly, BssWord};
use picentral::spans::{build_span, Budget, SpanSpec};
use picentral::{Field, Mode, Multidegree, Polynomial, SpanEngine, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rank of the normal-form images of all words of `d`.
fn nf_image_rank(field: Field, d: &Multidegree) -> usize {
    let mut cols: BTreeMap<BssWord, u32> = BTreeMap::new();
    let mut rows = Vec::new();
    for w in d.words() {
        let nf = reduce_poly(&Polynomial::monomial(field, Mode::Nonunital, w, 1).unwrap()).unwrap();
        let mut row: Vec<(u32, u32)> = nf
            .iter()
            .map(|(b, c)| {
                let n = cols.len() as u32;
                (*cols.entry(b.clone()).or_insert(n), c)
            })
            .collect();
        row.sort_unstable();
        rows.push(row);
    }
    let mut e = Echelon::new(field, cols.len().max(1));
    for r in rows {
        e.insert(&r);
    }
    e.rank()
}

#[test]
fn tg0_span_is_kernel_of_normal_form() {
    let cases: &[(u32, &[u32])] = &[
        (3, &[3]),
        (3, &[2, 2]),
        (3, &[3, 3]),
        (3, &[3, 2, 1]),
        (3, &[1, 1, 1, 1]),
        (3, &[2, 2, 2]),
        (5, &[5]),
        (5, &[3, 3]),
        (5, &[5, 2]),
    ];
    for &(p, degs) in cases {
        let field = Field::new(p).unwrap();
        let d = Multidegree::from_degrees(degs);
        let span = build_span(&SpanSpec::TG0, &d, field, Budget::default()).unwrap();
        assert!(span.is_exact());
        let words = d.word_count() as usize;
        assert_eq!(
            span.dimension(),
            words - nf_image_rank(field, &d),
            "p={p} d={d}"
        );
        for row in span.basis() {
            assert!(reduce_poly(&row).unwrap().is_zero(), "p={p} d={d}: {row}");
        }
    }
}

#[test]
fn larger_families_give_larger_spans() {
    let field = Field::new(3).unwrap();
    let mut engine = SpanEngine::new(field, Budget::default());
    let chain = ["S2", "S2+T3", "S2+TG0"];
    for d in [[2u32, 2].as_slice(), &[3, 2], &[2, 1, 1], &[3, 3]] {
        let d = Multidegree::from_degrees(d);
        let mut prev: Option<Vec<Polynomial>> = None;
        let mut last = 0;
        for spec in chain {
            let span = engine.span(&SpanSpec::parse(spec, field).unwrap(), &d).unwrap();
            assert!(span.dimension() >= last, "{spec} at {d}");
            last = span.dimension();
            if let Some(basis) = prev {
                for b in basis {
                    assert!(span.member(&b).unwrap().is_member(), "{spec} at {d}");
                }
            }
            prev = Some(span.basis());
        }
        let t3 = engine.span(&SpanSpec::T3, &d).unwrap();
        let tg0 = engine.span(&SpanSpec::TG0, &d).unwrap();
        assert!(t3.basis().iter().all(|b| tg0.member(b).unwrap().is_member()));
    }
}

fn random_monomial(field: Field, rng: &mut ChaCha8Rng) -> Polynomial {
    let len = rng.gen_range(1..=2);
    let w: Vec<u32> = (0..len).map(|_| rng.gen_range(1..=3)).collect();
    Polynomial::monomial(field, Mode::Nonunital, Word::new(w), 1).unwrap()
}

#[test]
fn spans_are_closed_under_substitution() {
    let field = Field::new(3).unwrap();
    let mut engine = SpanEngine::new(field, Budget::default());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sources = [
        (SpanSpec::S2, Multidegree::from_degrees(&[1, 1])),
        (SpanSpec::S2, Multidegree::from_degrees(&[2, 1])),
        (SpanSpec::T3, Multidegree::from_degrees(&[1, 1, 1])),
        (SpanSpec::TG0, Multidegree::from_degrees(&[3])),
        (SpanSpec::TG0, Multidegree::from_degrees(&[2, 1, 1])),
    ];
    let bases: Vec<(SpanSpec, Vec<Polynomial>)> = sources
        .iter()
        .map(|(spec, d)| (spec.clone(), engine.span(spec, d).unwrap().basis()))
        .collect();
    for case in 0..100 {
        let (spec, basis) = &bases[case % bases.len()];
        let f = &basis[rng.gen_range(0..basis.len())];
        let images: BTreeMap<u32, Polynomial> =
            f.variables().into_iter().map(|v| (v, random_monomial(field, &mut rng))).collect();
        let g = f.substitute(&images).unwrap();
        let res = engine.member_poly(&g, spec).unwrap();
        assert!(
            res.verdict() == picentral::spans::Verdict::Member,
            "{spec}: {f} under {images:?} gives {g}"
        );
    }
}

#[test]
fn span_builds_are_deterministic() {
    let field = Field::new(5).unwrap();
    let d = Multidegree::from_degrees(&[3, 2, 1]);
    let spec = SpanSpec::parse("S2+TG0", field).unwrap();
    let a = build_span(&spec, &d, field, Budget::default()).unwrap();
    let b = build_span(&spec, &d, field, Budget::default()).unwrap();
    assert_eq!(a.pivot_words(), b.pivot_words());
    assert_eq!(a.basis(), b.basis());
    let q = a.basis()[0].clone();
    let (ma, mb) = (a.member(&q).unwrap(), b.member(&q).unwrap());
    assert_eq!(a.certificate(&q, &ma, Some(1)), b.certificate(&q, &mb, Some(1)));
}

#[test]
fn certificates_round_trip_through_json() {
    let mut v = picentral::Verifier::new(picentral::Params::new(3)).unwrap();
    for key in ["L-handy-iv", "C-fund", "NC-handy-iv-sign"] {
        let mut cert = v.verify(key, None).unwrap();
        cert.runtime_ms = None;
        let json = cert.to_json(false);
        let back: picentral::Certificate = serde_json::from_value(json.clone()).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_json(false), json);
    }
}
