use proptest::prelude::*;

use umps_core::ch_relations::{example_relation, generate_ch_relation};
use umps_core::combinatorics::Word;
use umps_core::exact_algebra::{rat, DenseMatrix, RankMode, Rational};
use umps_core::span_character::SpanEngine;
use umps_core::trace_param::{generator_values, swap_letters, TraceParam};
use umps_core::{Exec, ResourceCaps};

fn mat(entries: &[i64]) -> DenseMatrix<Rational> {
    let m = (entries.len() as f64).sqrt() as usize;
    DenseMatrix::from_fn(m, |i, j| rat(entries[i * m + j]))
}

fn binary_word() -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..2, 1..=11).prop_map(Word::new)
}

fn pair() -> impl Strategy<Value = [DenseMatrix<Rational>; 2]> {
    (prop::array::uniform4(-4i64..=4), prop::array::uniform4(-4i64..=4)).prop_map(|(a, b)| [mat(&a), mat(&b)])
}

fn relation_value(terms: &[(Rational, Word)], mats: &[DenseMatrix<Rational>]) -> Rational {
    terms.iter().fold(rat(0), |acc, (c, w)| {
        acc + c * DenseMatrix::word_product(mats, w.letters()).trace()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduced_word_matches_matrix_trace(w in binary_word(), a in pair()) {
        let tp = TraceParam::new();
        let p = tp.reduce_word(&w).unwrap();
        let v = p.eval_dense(&generator_values(&a[0], &a[1])).unwrap();
        prop_assert_eq!(v, DenseMatrix::word_product(&a, w.letters()).trace());
    }

    #[test]
    fn reduction_is_dihedral_invariant(w in binary_word(), k in 0usize..11) {
        let tp = TraceParam::new();
        let p = tp.reduce_word(&w).unwrap();
        prop_assert_eq!(&*tp.reduce_word(&w.rotate(k % w.len())).unwrap(), &*p);
        prop_assert_eq!(&*tp.reduce_word(&w.reverse()).unwrap(), &*p);
    }

    #[test]
    fn letter_swap_commutes_with_reduction(w in binary_word()) {
        let tp = TraceParam::new();
        let swapped = w.relabel(&[1, 0]);
        prop_assert_eq!(swap_letters(&tp.reduce_word(&w).unwrap()), (*tp.reduce_word(&swapped).unwrap()).clone());
    }

    #[test]
    fn ch_relation_vanishes_on_integer_matrices(
        ell in 0usize..4,
        e in prop::collection::vec(-3i64..=3, 16),
    ) {
        let rel = generate_ch_relation(2, ell).unwrap();
        let mats: Vec<_> = e.chunks(4).map(mat).collect();
        prop_assert_eq!(relation_value(&rel.terms, &mats), rat(0));
    }

    #[test]
    fn example_relation_vanishes_with_any_trailing_power(
        k in 0usize..5,
        e in prop::collection::vec(-3i64..=3, 16),
    ) {
        let rel = example_relation().with_power(k);
        let mats: Vec<_> = e.chunks(4).map(mat).collect();
        prop_assert_eq!(relation_value(&rel.terms, &mats), rat(0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn character_is_mirror_symmetric_and_schedule_independent(d in 1usize..=10) {
        let par = SpanEngine::new(ResourceCaps::default(), Exec::Parallel);
        let seq = SpanEngine::new(ResourceCaps::default(), Exec::Sequential);
        let a = par.binary_dims_unmirrored(d, RankMode::default()).unwrap();
        let b = seq.binary_dims_unmirrored(d, RankMode::Exact).unwrap();
        prop_assert_eq!(&a, &b);
        for w in 0..=d {
            prop_assert_eq!(a[w], a[d - w]);
        }
    }
}
