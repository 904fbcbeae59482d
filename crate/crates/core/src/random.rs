//! Random test operators.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::matrix::ComplexMatrix;

/// Matrix with independent standard complex Gaussian entries.
pub fn random_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    ComplexMatrix::new(rows, cols, data).expect("gaussian samples are finite")
}

/// Haar-distributed unitary of size `dim`, via Gram-Schmidt on a complex
/// Gaussian matrix. Each column is orthogonalised twice so the result is
/// unitary to roughly machine precision.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_gaussian(dim, dim, rng);
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|j| (0..dim).map(|i| g[(i, j)]).collect())
        .collect();
    for j in 0..dim {
        for _ in 0..2 {
            for k in 0..j {
                let proj: Complex64 = cols[k]
                    .iter()
                    .zip(&cols[j])
                    .map(|(q, v)| q.conj() * v)
                    .sum();
                let qk = cols[k].clone();
                for (v, q) in cols[j].iter_mut().zip(&qk) {
                    *v -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[j].iter_mut().for_each(|z| *z /= norm);
    }
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    u
}
