use serde::{Deserialize, Serialize};

use super::VFamily;

/// The 3×4 matrix with rows `1`, `k_j`, `k_j²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelMatrix {
    k: [i64; 4],
    rows: [[i64; 4]; 3],
}

impl KernelMatrix {
    /// `None` unless the entries of `k` are pairwise distinct and positive.
    pub fn new(k: [i64; 4]) -> Option<Self> {
        let distinct = (0..4).all(|i| (i + 1..4).all(|j| k[i] != k[j]));
        if !distinct || k.iter().any(|&x| x < 1) {
            return None;
        }
        let rows = [[1; 4], k, k.map(|x| x * x)];
        Some(KernelMatrix { k, rows })
    }

    pub fn k(&self) -> [i64; 4] {
        self.k
    }

    pub fn rows(&self) -> &[[i64; 4]; 3] {
        &self.rows
    }

    pub fn apply(&self, v: &[i64; 4]) -> [i64; 3] {
        self.rows.map(|row| (0..4).map(|j| row[j] * v[j]).sum())
    }

    pub fn rank(&self) -> usize {
        let m: Vec<Vec<i128>> = self.rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        bareiss_rank(m)
    }
}

/// Rank by fraction-free elimination.
fn bareiss_rank(mut m: Vec<Vec<i128>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for cc in c + 1..cols {
                m[r][cc] = (m[rank][c] * m[r][cc] - m[r][c] * m[rank][cc]) / prev;
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Determinant of the 4×4 matrix `(k_j^q)`, `q = 0..3`, by Bareiss elimination.
pub fn vandermonde_det(k: [i64; 4]) -> i128 {
    let mut m: Vec<Vec<i128>> = (0..4u32).map(|q| k.iter().map(|&x| (x as i128).pow(q)).collect()).collect();
    let n = 4;
    let mut sign = 1i128;
    let mut prev = 1i128;
    for c in 0..n - 1 {
        if m[c][c] == 0 {
            match (c + 1..n).find(|&r| m[r][c] != 0) {
                Some(p) => {
                    m.swap(c, p);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for r in c + 1..n {
            for cc in c + 1..n {
                m[r][cc] = (m[c][c] * m[r][cc] - m[r][c] * m[c][cc]) / prev;
            }
            m[r][c] = 0;
        }
        prev = m[c][c];
    }
    sign * m[n - 1][n - 1]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelCounterexample {
    /// The 4×4 power matrix is singular.
    Vandermonde { k: [i64; 4] },
    /// A family vector lies in the kernel of the 3×4 matrix.
    Kernel { k: [i64; 4], v_index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    #[serde(rename = "K")]
    pub k_max: u32,
    pub tuples_checked: u64,
    pub counterexamples: Vec<KernelCounterexample>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Over all ordered 4-tuples of distinct integers in `[1, K]`, checks that
/// the power matrix is nonsingular and that no family vector is in the
/// kernel of the 3×4 matrix. Stops at the first counterexample.
pub fn verify_kernel(k_max: u32) -> VerificationReport {
    let kk = k_max as i64;
    let mut tuples = 0u64;
    for a in 1..=kk {
        for b in (1..=kk).filter(|&b| b != a) {
            for c in (1..=kk).filter(|&c| c != a && c != b) {
                for d in (1..=kk).filter(|&d| d != a && d != b && d != c) {
                    let k = [a, b, c, d];
                    tuples += 1;
                    let report = |cx| VerificationReport { k_max, tuples_checked: tuples, counterexamples: vec![cx] };
                    if vandermonde_det(k) == 0 {
                        return report(KernelCounterexample::Vandermonde { k });
                    }
                    let m = KernelMatrix::new(k).expect("entries distinct and positive");
                    for (i, v) in VFamily::VECTORS.iter().enumerate() {
                        if m.apply(v) == [0, 0, 0] {
                            return report(KernelCounterexample::Kernel { k, v_index: i + 1 });
                        }
                    }
                }
            }
        }
    }
    VerificationReport { k_max, tuples_checked: tuples, counterexamples: Vec::new() }
}
