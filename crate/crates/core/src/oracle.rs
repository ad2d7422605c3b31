//! Reference spectrum from the truncated Fock basis.
//!
//! Basis |n⟩⊗|±⟩ with index 2n (σᶻ = +1) and 2n+1 (σᶻ = −1).

use nalgebra::{DMatrix, SymmetricEigen};

/// Boson occupation cutoff; the matrix has dimension 2(n_max + 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockTruncation {
    pub n_max: usize,
}

impl FockTruncation {
    pub fn new(n_max: usize) -> Self {
        Self {
            n_max: n_max.max(1),
        }
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }
}

impl Default for FockTruncation {
    fn default() -> Self {
        Self { n_max: 80 }
    }
}

/// H = a†a + Δσᶻ + gσˣ(a + a†) in the truncated basis.
pub fn build_hamiltonian(g: f64, delta: f64, trunc: FockTruncation) -> DMatrix<f64> {
    let nm = trunc.n_max;
    let mut h = DMatrix::zeros(trunc.dim(), trunc.dim());
    for n in 0..=nm {
        h[(2 * n, 2 * n)] = n as f64 + delta;
        h[(2 * n + 1, 2 * n + 1)] = n as f64 - delta;
        if n < nm {
            let c = g * ((n + 1) as f64).sqrt();
            h[(2 * n, 2 * n + 3)] = c;
            h[(2 * n + 3, 2 * n)] = c;
            h[(2 * n + 1, 2 * n + 2)] = c;
            h[(2 * n + 2, 2 * n + 1)] = c;
        }
    }
    h
}

fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Full spectrum of the truncated Hamiltonian, ascending.
pub fn eigenvalues(g: f64, delta: f64, trunc: FockTruncation) -> Vec<f64> {
    sorted_eigenvalues(build_hamiltonian(g, delta, trunc))
}

/// The two blocks of the parity σᶻ(−1)^{a†a}. Block `p` holds the states
/// (n, +) with (−1)^n = p and (n, −) with (−1)^n = −p, ordered by n.
pub fn parity_blocks(g: f64, delta: f64, trunc: FockTruncation) -> (DMatrix<f64>, DMatrix<f64>) {
    let nm = trunc.n_max;
    let block = |even: bool| {
        let mut b = DMatrix::zeros(nm + 1, nm + 1);
        for n in 0..=nm {
            let plus = (n % 2 == 0) == even;
            b[(n, n)] = n as f64 + if plus { delta } else { -delta };
            if n < nm {
                let c = g * ((n + 1) as f64).sqrt();
                b[(n, n + 1)] = c;
                b[(n + 1, n)] = c;
            }
        }
        b
    };
    (block(true), block(false))
}

/// Ascending union of the parity-block spectra.
pub fn parity_eigenvalues(g: f64, delta: f64, trunc: FockTruncation) -> Vec<f64> {
    let (a, b) = parity_blocks(g, delta, trunc);
    let mut ev = sorted_eigenvalues(a);
    ev.extend(sorted_eigenvalues(b));
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Lowest `k` eigenvalues, doubling the cutoff from `start` until they move
/// by less than `tol`. Returns the values and the cutoff used.
pub fn converged_lowest(
    g: f64,
    delta: f64,
    k: usize,
    start: FockTruncation,
    tol: f64,
    max_n: usize,
) -> (Vec<f64>, FockTruncation) {
    let mut trunc = start;
    let mut prev: Vec<f64> = parity_eigenvalues(g, delta, trunc)
        .into_iter()
        .take(k)
        .collect();
    while trunc.n_max * 2 <= max_n {
        let next = FockTruncation::new(trunc.n_max * 2);
        let cur: Vec<f64> = parity_eigenvalues(g, delta, next)
            .into_iter()
            .take(k)
            .collect();
        let moved = prev
            .iter()
            .zip(&cur)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        prev = cur;
        trunc = next;
        if moved < tol {
            break;
        }
    }
    (prev, trunc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uncoupled() {
        let ev = eigenvalues(0.0, 0.4, FockTruncation::new(10));
        let want = [-0.4, 0.4, 0.6, 1.4, 1.6];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn explicit_small_matrix() {
        let h = build_hamiltonian(0.5, 0.3, FockTruncation::new(1));
        let want = DMatrix::from_row_slice(
            4,
            4,
            &[
                0.3, 0.0, 0.0, 0.5, //
                0.0, -0.3, 0.5, 0.0, //
                0.0, 0.5, 1.3, 0.0, //
                0.5, 0.0, 0.0, 0.7,
            ],
        );
        assert_eq!(h, want);
        assert_eq!(h.transpose(), h);
    }

    #[test]
    fn displaced_oscillator() {
        let ev = eigenvalues(0.5, 0.0, FockTruncation::new(60));
        let want = [-0.25, -0.25, 0.75, 0.75, 1.75, 1.75];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn blocks_reproduce_spectrum() {
        let t = FockTruncation::new(40);
        let (a, b) = parity_blocks(0.3, 0.5, t);
        assert_eq!(a.nrows(), 41);
        assert_eq!(b.nrows(), 41);
        let full = eigenvalues(0.3, 0.5, t);
        let split = parity_eigenvalues(0.3, 0.5, t);
        for (x, y) in full.iter().zip(&split) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn cutoff_doubling() {
        let (ev, used) = converged_lowest(0.3, 0.5, 8, FockTruncation::new(80), 1e-10, 320);
        assert_eq!(ev.len(), 8);
        assert!(used.n_max >= 160);
    }
}
