use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use proptest::prelude::*;

use gspin::chevalley::{build_table, StructureConstants};
use gspin::satake::{self, GSpinParameter, ParameterFamily, UnramifiedCharacter};
use gspin::steinberg::{self, adjoint_eval, GroupWord, TorusMonomial};
use gspin::weyl::WeylElement;
use gspin::{lattice, Family, RootDatum, ScalarExpr};

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

fn nonzero_rat() -> impl Strategy<Value = BigRational> {
    (prop_oneof![-6i64..=-1, 1i64..=6], 1i64..=5).prop_map(|(p, d)| q(p, d))
}

fn scalar() -> impl Strategy<Value = ScalarExpr> {
    let leaf = prop_oneof![
        (-5i64..=5, 1i64..=4).prop_map(|(p, d)| ScalarExpr::frac(p, d)),
        prop_oneof![Just("x"), Just("y"), Just("z")].prop_map(ScalarExpr::var),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(&b)),
            inner.prop_map(|a| a.neg()),
        ]
    })
}

fn point() -> HashMap<String, BigRational> {
    [("x", q(2, 3)), ("y", q(-5, 2)), ("z", q(7, 1))].into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

proptest! {
    #[test]
    fn scalar_display_parses_back(e in scalar()) {
        let back = ScalarExpr::parse(&e.to_string()).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn scalar_ring_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        if !a.is_zero() {
            prop_assert!(a.div(&a).unwrap().is_one());
        }
    }

    #[test]
    fn scalar_eval_is_a_homomorphism(a in scalar(), b in scalar()) {
        let p = point();
        let (va, vb) = (a.eval(&p).unwrap(), b.eval(&p).unwrap());
        prop_assert_eq!(a.mul(&b).eval(&p).unwrap(), &va * &vb);
        prop_assert_eq!(a.add(&b).eval(&p).unwrap(), va + vb);
    }
}

fn weyl_case() -> impl Strategy<Value = (Family, usize, Vec<usize>)> {
    prop_oneof![Just((Family::GspinOdd, 3usize)), Just((Family::GspinEven, 4)), Just((Family::Gsp, 3)), Just((Family::Gl, 4))]
        .prop_flat_map(|(f, n)| {
            let r = RootDatum::build(f.clone(), n).unwrap().rank();
            (Just(f), Just(n), prop::collection::vec(0..r, 0..12))
        })
}

proptest! {
    #[test]
    fn weyl_words_act_consistently((f, n, word) in weyl_case()) {
        let d = RootDatum::build(f, n).unwrap();
        let w = WeylElement::from_word(&d, &word).unwrap();
        let by_letters = word.iter().fold(WeylElement::identity(&d), |acc, &i| acc.compose(&WeylElement::simple(&d, i).unwrap()));
        prop_assert_eq!(&w.action_x, &by_letters.action_x);
        let red = w.reduced(&d);
        prop_assert_eq!(&red.action_x, &w.action_x);
        prop_assert_eq!(red.word.len(), w.length(&d));
        prop_assert_eq!(red.word.len() % 2, word.len() % 2);
        prop_assert!(w.compose(&w.inverse()).is_identity());
        // Pairings are preserved: ⟨wx, wy∨⟩ = ⟨x, y∨⟩.
        for (a, c) in d.simple_roots.iter().zip(&d.simple_coroots) {
            prop_assert_eq!(lattice::dot(&w.apply(a), &w.apply_dual(c)), lattice::dot(a, c));
        }
        let perm = w.root_permutation(&d);
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..d.roots().len()).collect::<Vec<_>>());
        let det = lattice::det(&w.action_x);
        prop_assert_eq!(det, if word.len() % 2 == 0 { 1 } else { -1 });
    }
}

fn rewriting_cases() -> Vec<StructureConstants> {
    [(Family::GspinOdd, 2usize), (Family::GspinOdd, 3), (Family::GspinEven, 3)]
        .into_iter()
        .map(|(f, n)| build_table(&RootDatum::build(f, n).unwrap()).unwrap())
        .collect()
}

#[derive(Clone, Debug)]
enum AtomSpec {
    U(usize, BigRational),
    W(usize, bool),
    T(usize, BigRational),
}

fn word_spec() -> impl Strategy<Value = (usize, Vec<AtomSpec>)> {
    (0usize..3).prop_flat_map(|case| {
        let atom = prop_oneof![
            4 => (0usize..64, nonzero_rat()).prop_map(|(r, x)| AtomSpec::U(r, x)),
            2 => (0usize..8, any::<bool>()).prop_map(|(i, inv)| AtomSpec::W(i, inv)),
            1 => (0usize..8, nonzero_rat()).prop_map(|(k, x)| AtomSpec::T(k, x)),
        ];
        (Just(case), prop::collection::vec(atom, 0..7))
    })
}

fn realize(t: &StructureConstants, spec: &[AtomSpec]) -> GroupWord {
    let rs = t.roots();
    let (nr, rank, dim) = (rs.len(), t.datum().rank(), t.datum().dim_x);
    spec.iter().fold(GroupWord::identity(), |w, a| {
        let piece = match a {
            AtomSpec::U(r, x) => GroupWord::u(r % nr, ScalarExpr::rational(x.clone())),
            AtomSpec::W(i, inv) => GroupWord::weyl(i % rank, *inv),
            AtomSpec::T(k, x) => GroupWord::torus(TorusMonomial::single(k % dim, ScalarExpr::rational(x.clone()))),
        };
        w.then(&piece)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalize_is_idempotent_and_sound((case, spec) in word_spec()) {
        let tables = rewriting_cases();
        let t = &tables[case];
        let w = realize(t, &spec);
        let nf = steinberg::normalize(&w, t).unwrap();
        prop_assert_eq!(steinberg::normalize(&nf, t).unwrap(), nf.clone());
        let none = HashMap::new();
        prop_assert_eq!(adjoint_eval(&nf, t, &none).unwrap(), adjoint_eval(&w, t, &none).unwrap());
        let inv = w.inverse().unwrap();
        prop_assert!(steinberg::normalize(&w.clone().then(&inv), t).unwrap().is_empty());
    }
}

#[test]
fn symbolic_words_agree_with_oracle_at_points() {
    let tables = rewriting_cases();
    let x = ScalarExpr::var("x");
    for t in &tables {
        let rs = t.roots();
        for r in 0..rs.len() {
            let w = GroupWord::weyl(0, false).then(&GroupWord::u(r, x.clone())).then(&GroupWord::weyl(0, true));
            let nf = steinberg::normalize(&w, t).unwrap();
            for v in [q(1, 2), q(-3, 1), q(5, 7)] {
                let p: HashMap<String, BigRational> = [("x".to_string(), v)].into();
                assert_eq!(adjoint_eval(&w, t, &p).unwrap(), adjoint_eval(&nf, t, &p).unwrap());
            }
        }
    }
}

#[test]
fn parse_render_round_trip() {
    let t = build_table(&RootDatum::build(Family::GspinOdd, 3).unwrap()).unwrap();
    let d = t.datum();
    let w = steinberg::parse_word("u[a1+a2](x) * w[2]^-1 * t[e0^:3, a1^:y] * u[-a3](1/2)", d).unwrap();
    let back = steinberg::parse_word(&w.render(d), d).unwrap();
    assert_eq!(back, w);
    assert!(steinberg::parse_word("u[a1+a3](1)", d).is_err());
}

fn character() -> impl Strategy<Value = UnramifiedCharacter> {
    (-3i64..=3, -2i64..=2, -9i64..=9, 1i64..=6).prop_map(|(m, v, p, d)| {
        UnramifiedCharacter::new("μ", m, Rational64::new(p, d)).mul(&UnramifiedCharacter::new("ν", v, Rational64::from_integer(0)))
    })
}

fn parameter() -> impl Strategy<Value = GSpinParameter> {
    (any::<bool>(), 2usize..=4).prop_flat_map(|(odd, n)| {
        let fam = if odd { ParameterFamily::Odd } else { ParameterFamily::Even };
        prop::collection::vec(character(), n + 1).prop_map(move |c| GSpinParameter::new(fam, n, c).unwrap())
    })
}

proptest! {
    #[test]
    fn character_text_and_json_round_trip(c in character()) {
        prop_assert_eq!(UnramifiedCharacter::parse(&c.to_string()).unwrap(), c.clone());
        let j = serde_json::to_string(&c).unwrap();
        prop_assert_eq!(serde_json::from_str::<UnramifiedCharacter>(&j).unwrap(), c);
    }

    #[test]
    fn transfer_invariants(p in parameter()) {
        let t = satake::transfer(&p);
        prop_assert_eq!(t.gl.entries.len(), 2 * p.n);
        prop_assert_eq!(t.gl.central_character(), p.chars[0].pow(p.n as i64));
        prop_assert!(satake::twist_dual_check(&t.gl, &p.chars[0]));
        let j = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<GSpinParameter>(&j).unwrap(), p.clone());
        let d = RootDatum::build(p.family.datum_family(), p.n).unwrap();
        let (generic, wit) = satake::is_generic_unramified(&d, &p).unwrap();
        prop_assert_eq!(generic, wit.is_empty());
    }
}

#[test]
fn datum_json_round_trips() {
    for f in Family::BUILT {
        for n in 2..=5 {
            let d = RootDatum::build(f.clone(), n).unwrap();
            let j = serde_json::to_string(&d).unwrap();
            let back: RootDatum = serde_json::from_str(&j).unwrap();
            assert_eq!(back, d);
            assert!(j.contains("\"dim_X\""));
        }
    }
}
