use std::collections::BTreeMap;

use liesplit_core::functors::{concat_dense, gl_closure, q_n_indecomposables, subhopf_evaluate};
use liesplit_core::hilton::{basic_products, hilbert_series_d_dims, multiplicity};
use liesplit_core::liealg::{left_normed_span, lyndon_words};
use liesplit_core::natural::factorial;
use liesplit_core::tensoralg::{antipode, coproduct, lambda};
use liesplit_core::*;
use proptest::prelude::*;

fn small_field() -> impl Strategy<Value = FieldRef> {
    prop_oneof![Just((2, 1)), Just((2, 3)), Just((3, 1)), Just((3, 2)), Just((5, 1)), Just((7, 1))]
        .prop_map(|(p, e)| make_field(p, e).unwrap())
}

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    (0..factorial(n)).prop_map(move |r| Permutation::unrank(n, r))
}

/// Span of all products `x_1 ... x_r` with `x_i` in a left-normed Lie power
/// of a degree in `gens`, summing to `q`.
fn product_span_oracle(gens: &[usize], q: usize, m: usize, field: &FieldRef) -> usize {
    let f = field.as_ref();
    let lie: BTreeMap<usize, Vec<Vec<u32>>> =
        gens.iter().map(|&g| (g, left_normed_span(g, m, field).unwrap().basis_vecs())).collect();
    let mut by_degree: Vec<Vec<Vec<u32>>> = vec![vec![vec![1]]];
    for d in 1..=q {
        let mut span = SpanBuilder::new(m.pow(d as u32));
        for (&g, basis) in &lie {
            if g > d {
                continue;
            }
            for x in basis {
                for y in &by_degree[d - g] {
                    span.insert(f, &concat_dense(f, x, y));
                }
            }
        }
        by_degree.push(span.rows().to_vec());
    }
    by_degree[q].len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(field in small_field(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field.as_ref();
        let q = f.order();
        let (a, b, c) = (Scalar(a % q), Scalar(b % q), Scalar(c % q));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Scalar::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Scalar::ONE);
            prop_assert_eq!(f.pow(a, (q - 1) as u64), Scalar::ONE);
        }
    }

    #[test]
    fn permutation_rank_round_trip(n in 1usize..=6, r in any::<usize>()) {
        let r = r % factorial(n);
        let s = Permutation::unrank(n, r);
        prop_assert_eq!(s.rank(), r);
        prop_assert!(s.star(&s.inverse()).is_identity());
    }

    #[test]
    fn star_is_associative((a, b, c) in (1usize..=5).prop_flat_map(|n| (perm(n), perm(n), perm(n)))) {
        prop_assert_eq!(a.star(&b).star(&c), a.star(&b.star(&c)));
    }

    #[test]
    fn eventual_idempotent_is_idempotent_and_commutes(
        field in small_field(),
        (n, raw) in (1usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(any::<u32>(), factorial(n)))),
    ) {
        let q = field.order();
        let a = GroupAlgebraElement::from_coords(&field, n, raw.into_iter().map(|x| x % q).collect()).unwrap();
        let (e, k) = eventual_idempotent(&a);
        prop_assert!(k >= 1);
        prop_assert!(e.is_idempotent());
        prop_assert_eq!(a.mul(&e).unwrap(), e.mul(&a).unwrap());
        // a^k and e generate the same right ideal
        let ak = a.pow(k as u64);
        let rank = |x: &GroupAlgebraElement| x.left_regular_matrix().rank(x.field());
        prop_assert_eq!(rank(&ak), rank(&e));
        prop_assert_eq!(rank(&ak.mul(&e).unwrap()), rank(&e));
    }

    #[test]
    fn gl_closure_is_closed(
        p in prop::sample::select(vec![2u32, 3]),
        (n, raw) in (1usize..=3).prop_flat_map(|n| (Just(n), prop::collection::vec(any::<u32>(), 1usize << n))),
        pick in any::<u64>(),
    ) {
        let field = make_field(p, 1).unwrap();
        let f = field.as_ref();
        let v: Vec<u32> = raw.iter().map(|x| x % p).collect();
        let seed = Tensor::from_dense(&field, 2, n, &v);
        let w = gl_closure(&seed, 2).unwrap();
        prop_assert!(w.contains(f, &v));
        let basis = w.basis_vecs();
        if !basis.is_empty() {
            let mut u = vec![0u32; w.ambient()];
            for (i, b) in basis.iter().enumerate() {
                f.axpy(&mut u, ((pick >> (2 * i % 64)) % p as u64) as u32, b);
            }
            let again = gl_closure(&Tensor::from_dense(&field, 2, n, &u), 2).unwrap();
            prop_assert!(w.contains_subspace(f, &again));
        }
    }

    #[test]
    fn subhopf_matches_product_span(
        p in prop::sample::select(vec![2u32, 3]),
        gens in prop::collection::btree_set(1usize..=5, 1..=3),
        q in 1usize..=7,
    ) {
        let field = make_field(p, 1).unwrap();
        let gens: Vec<usize> = gens.into_iter().collect();
        let b = subhopf_evaluate(&gens, q, 2, &field).unwrap();
        prop_assert_eq!(b.dim(q), product_span_oracle(&gens, q, 2, &field));
    }

    #[test]
    fn indecomposables_ignore_higher_generators(
        gens in prop::collection::btree_set(1usize..=4, 1..=2),
        extra in 5usize..=7,
        q in 1usize..=4,
    ) {
        let field = make_field(2, 1).unwrap();
        let f = field.as_ref();
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut more = gens.clone();
        more.push(extra);
        let a = subhopf_evaluate(&gens, q, 2, &field).unwrap();
        let b = subhopf_evaluate(&more, q, 2, &field).unwrap();
        prop_assert_eq!(q_n_indecomposables(&a, q, f).unwrap().dim, q_n_indecomposables(&b, q, f).unwrap().dim);
    }

    #[test]
    fn hilbert_inversion_round_trip(d in prop::collection::vec(0u64..4, 1..=8)) {
        let cap = d.len();
        let mut dd = vec![0u64];
        dd.extend(&d);
        let mut b = vec![1u64; 1];
        for n in 1..=cap {
            b.push((1..=n).map(|i| dd[i] * b[n - i]).sum());
        }
        prop_assert_eq!(hilbert_series_d_dims(&b, cap).unwrap(), dd);
    }

    #[test]
    fn basic_product_counts_match_multiplicity(
        degrees in prop::collection::vec(1usize..=3, 1..=3),
        cap in 1usize..=7,
    ) {
        let mut degrees = degrees;
        degrees.sort_unstable();
        let list = basic_products(&degrees, cap).unwrap();
        let mut counts: BTreeMap<Vec<usize>, u128> = BTreeMap::new();
        for bp in &list {
            *counts.entry(bp.multiplicities.clone()).or_default() += 1;
        }
        for (mult, c) in counts {
            prop_assert_eq!(multiplicity(&mult), c);
        }
        prop_assert!(list.iter().all(|bp| bp.d <= cap));
    }

    #[test]
    fn witt_necklace_identity(n in 1u64..=12, m in 1u64..=4) {
        let total: u128 = (1..=n).filter(|d| n % d == 0).map(|d| d as u128 * witt_dim(d, m)).sum();
        prop_assert_eq!(total, (m as u128).pow(n as u32));
        if n <= 8 {
            prop_assert_eq!(lyndon_words(n as usize, m as usize).len() as u128, witt_dim(n, m));
        }
    }

    #[test]
    fn lyndon_and_left_normed_spans_agree(n in 1usize..=6, p in prop::sample::select(vec![2u32, 3, 5])) {
        let field = make_field(p, 1).unwrap();
        prop_assert_eq!(lyndon_basis(n, 2, &field).unwrap(), left_normed_span(n, 2, &field).unwrap());
    }

    #[test]
    fn theta_matches_split_sum_expansion(
        (p, e) in prop_oneof![Just((2u32, 2u32)), Just((3, 1)), Just((5, 1))],
        m in 1usize..=3,
        word in prop::collection::vec(1usize..=3, 0..=7),
    ) {
        let field = make_field(p, e).unwrap();
        let zeta = field.generator();
        let word: Vec<usize> = word.into_iter().map(|l| (l - 1) % m + 1).collect();
        let t = Tensor::word(&field, m, &word).unwrap();
        let as_tensor = |w: &Word| {
            let letters: Vec<usize> = w.letters().iter().map(|&l| l as usize).collect();
            Tensor::word(&field, m, &letters).unwrap()
        };
        let direct = coproduct(&t)
            .map_each(|a| lambda(zeta, &as_tensor(a)), |b| antipode(&as_tensor(b)))
            .multiply_out();
        let theta = NaturalTransform::theta(&field, zeta, 7).unwrap();
        prop_assert_eq!(theta.apply(&t).unwrap(), direct);
    }

    #[test]
    fn parser_round_trip(text in functor_text()) {
        let field = make_field(3, 1).unwrap();
        let spec = FunctorSpec::parse(&field, &text).unwrap();
        let again = FunctorSpec::parse(&field, &spec.to_string()).unwrap();
        prop_assert_eq!(&again, &spec);
        prop_assert_eq!(again.to_string(), spec.to_string());
    }
}

fn functor_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (1usize..5).prop_map(|n| format!("T({n})")),
        (1usize..5).prop_map(|n| format!("L({n})")),
        (1usize..5).prop_map(|n| format!("Lres({n})")),
        Just("Cl(x1x2-x2x1)".to_string()),
        Just("Cl(2x1x1x2+x2x1x1)".to_string()),
        Just("B{2,3;6}".to_string()),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("[{a},{b}]")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} ⊗ {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}+{b})")),
            (2usize..4, inner).prop_map(|(k, a)| format!("L{k}∘{a}")),
        ]
    })
}
