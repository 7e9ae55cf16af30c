use hrwave::pauli::{parse_operator_sum, write_operator_sum, Letter, MaterializeCaps, OperatorSum, PauliString, PauliTerm, StateVector};
use nalgebra::DMatrix;
use num_complex::Complex;
use proptest::prelude::*;

type C = Complex<f64>;

fn pauli_2x2(l: Letter) -> [[C; 2]; 2] {
    let (o, z, i) = (C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 1.0));
    match l {
        Letter::I => [[o, z], [z, o]],
        Letter::X => [[z, o], [o, z]],
        Letter::Y => [[z, -i], [i, z]],
        Letter::Z => [[o, z], [z, -o]],
    }
}

// element-wise tensor product, qubit q on bit q of the index
fn oracle(letters: &[Letter]) -> DMatrix<C> {
    let dim = 1usize << letters.len();
    DMatrix::from_fn(dim, dim, |r, c| letters.iter().enumerate().map(|(q, &l)| pauli_2x2(l)[(r >> q) & 1][(c >> q) & 1]).product())
}

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::I), Just(Letter::X), Just(Letter::Y), Just(Letter::Z)]
}

fn letters(width: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(letter(), width)
}

fn sum(width: usize) -> impl Strategy<Value = OperatorSum<f64>> {
    prop::collection::vec((letters(width), -2.0..2.0f64, -2.0..2.0f64), 0..6).prop_map(move |ts| {
        let terms = ts.into_iter().map(|(l, re, im)| PauliTerm::new(C::new(re, im), PauliString::from_letters(&l).unwrap())).collect();
        OperatorSum::from_terms(width, terms).unwrap()
    })
}

fn dist(a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn phase(k: u8) -> C {
    [C::new(1.0, 0.0), C::new(0.0, 1.0), C::new(-1.0, 0.0), C::new(0.0, -1.0)][k as usize]
}

proptest! {
    #[test]
    fn string_product_matches_matrices((a, b) in (1usize..5).prop_flat_map(|w| (letters(w), letters(w)))) {
        let (pa, pb) = (PauliString::from_letters(&a).unwrap(), PauliString::from_letters(&b).unwrap());
        let (k, p) = pa.mul(&pb).unwrap();
        let want = oracle(&a) * oracle(&b);
        prop_assert!(dist(&(oracle(&p.letters()) * phase(k)), &want) < 1e-14);
        let ab = &want;
        let ba = oracle(&b) * oracle(&a);
        prop_assert_eq!(pa.commutes_with(&pb), dist(ab, &ba) < 1e-14);
    }

    #[test]
    fn sum_algebra_matches_matrices((a, b) in (1usize..4).prop_flat_map(|w| (sum(w), sum(w)))) {
        let caps = MaterializeCaps::default();
        let (da, db) = (a.to_dense(caps).unwrap(), b.to_dense(caps).unwrap());
        prop_assert!(dist(&a.mul(&b).unwrap().to_dense(caps).unwrap(), &(&da * &db)) < 1e-12);
        prop_assert!(dist(&a.add(&b).unwrap().to_dense(caps).unwrap(), &(&da + &db)) < 1e-12);
        prop_assert!(dist(&a.commutator(&b).unwrap().to_dense(caps).unwrap(), &(&da * &db - &db * &da)) < 1e-12);
        prop_assert!(dist(&a.adjoint().to_dense(caps).unwrap(), &da.adjoint()) < 1e-12);
        let back = OperatorSum::from_dense(&da).unwrap();
        prop_assert!(back.sub(&a).unwrap().one_norm() < 1e-12);
    }

    #[test]
    fn apply_matches_matrix(a in (1usize..5).prop_flat_map(sum), seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let s = StateVector::<f64>::random(a.width(), &mut rng);
        let out = a.apply(&s).unwrap();
        let v = nalgebra::DVector::from_column_slice(s.amplitudes());
        let want = a.to_dense(MaterializeCaps::default()).unwrap() * v;
        let err = out.amplitudes().iter().zip(want.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
    }

    #[test]
    fn text_round_trip_is_exact(a in (1usize..6).prop_flat_map(sum)) {
        let back: OperatorSum<f64> = parse_operator_sum(a.width(), &write_operator_sum(&a)).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn one_norm_is_subadditive_and_submultiplicative((a, b) in (1usize..4).prop_flat_map(|w| (sum(w), sum(w)))) {
        prop_assert!(a.add(&b).unwrap().one_norm() <= a.one_norm() + b.one_norm() + 1e-12);
        prop_assert!(a.mul(&b).unwrap().one_norm() <= a.one_norm() * b.one_norm() + 1e-12);
    }
}

#[test]
fn mismatched_widths_are_rejected() {
    let a = PauliString::identity(2).unwrap();
    let b = PauliString::identity(3).unwrap();
    assert!(a.mul(&b).is_err());
    assert!(OperatorSum::<f64>::zero(2).add(&OperatorSum::zero(3)).is_err());
}
