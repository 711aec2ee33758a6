//! Seeded inputs shared by the kernel benchmarks.

use liesplit_core::{FieldRef, GroupAlgebraElement, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_matrix(field: &FieldRef, rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = field.order();
    Matrix::from_vec(rows, cols, (0..rows * cols).map(|_| rng.gen_range(0..q)).collect())
}

pub fn random_element(field: &FieldRef, n: usize, seed: u64) -> GroupAlgebraElement {
    let order: usize = (1..=n).product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = field.order();
    GroupAlgebraElement::from_coords(field, n, (0..order).map(|_| rng.gen_range(0..q)).collect()).expect("valid degree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use liesplit_core::make_field;

    #[test]
    fn inputs_are_seeded() {
        let f = make_field(3, 1).unwrap();
        assert_eq!(random_matrix(&f, 4, 5, 1), random_matrix(&f, 4, 5, 1));
        assert_eq!(random_element(&f, 4, 2).coords().len(), 24);
    }
}
