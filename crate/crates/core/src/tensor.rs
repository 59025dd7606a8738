//! Covariant tensors on a 2-dimensional parameter domain, in the coordinate
//! basis. Components are stored flat: the multi-index `(a₁, …, a_k)` maps to
//! `Σ aᵢ 2^{k−1−i}`.

use serde::Serialize;

use crate::jets::Jet2;

#[inline]
fn digit(flat: usize, rank: usize, pos: usize) -> usize {
    (flat >> (rank - 1 - pos)) & 1
}

#[inline]
fn with_digit(flat: usize, rank: usize, pos: usize, d: usize) -> usize {
    let bit = 1 << (rank - 1 - pos);
    (flat & !bit) | (d * bit)
}

/// Flat index of a multi-index.
pub fn flat_index(idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &a| (acc << 1) | a)
}

/// Levi-Civita connection coefficients `Γ^c_ab`, stored as `[c][a][b]`.
#[derive(Debug, Clone)]
pub struct Christoffel(pub [[[Jet2; 2]; 2]; 2]);

impl Christoffel {
    /// `Γ^c_ab = ½ g^{cd}(∂_a g_bd + ∂_b g_ad − ∂_d g_ab)`.
    pub fn from_metric(g: &[[Jet2; 2]; 2], ginv: &[[Jet2; 2]; 2]) -> Self {
        let dg: [[[Jet2; 2]; 2]; 2] = std::array::from_fn(|c| {
            std::array::from_fn(|a| std::array::from_fn(|b| g[a][b].partial(c)))
        });
        let lowered: [[[Jet2; 2]; 2]; 2] = std::array::from_fn(|d| {
            std::array::from_fn(|a| {
                std::array::from_fn(|b| (dg[a][b][d] + dg[b][a][d] - dg[d][a][b]).scale(0.5))
            })
        });
        Christoffel(std::array::from_fn(|c| {
            std::array::from_fn(|a| {
                std::array::from_fn(|b| {
                    ginv[c][0] * lowered[0][a][b] + ginv[c][1] * lowered[1][a][b]
                })
            })
        }))
    }

    pub fn values(&self) -> [[[f64; 2]; 2]; 2] {
        self.0.map(|x| x.map(|y| y.map(|j| j.value())))
    }
}

/// A jet-valued covariant tensor field of a given rank.
#[derive(Debug, Clone)]
pub struct TensorField {
    rank: usize,
    comps: Vec<Jet2>,
}

impl TensorField {
    pub fn from_fn(rank: usize, f: impl Fn(&[usize]) -> Jet2) -> Self {
        let mut idx = vec![0usize; rank];
        let comps = (0..1usize << rank)
            .map(|n| {
                for (pos, slot) in idx.iter_mut().enumerate() {
                    *slot = digit(n, rank, pos);
                }
                f(&idx)
            })
            .collect();
        TensorField { rank, comps }
    }

    pub fn scalar(value: Jet2) -> Self {
        TensorField {
            rank: 0,
            comps: vec![value],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, idx: &[usize]) -> Jet2 {
        debug_assert_eq!(idx.len(), self.rank);
        self.comps[flat_index(idx)]
    }

    pub fn comps(&self) -> &[Jet2] {
        &self.comps
    }

    pub fn order(&self) -> usize {
        self.comps.iter().map(|j| j.order()).min().unwrap_or(0)
    }

    pub fn values(&self) -> Tensor {
        Tensor {
            rank: self.rank,
            data: self.comps.iter().map(|j| j.value()).collect(),
        }
    }

    pub fn sub(&self, other: &TensorField) -> TensorField {
        assert_eq!(self.rank, other.rank);
        TensorField {
            rank: self.rank,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }
}

/// `(∇S)_{l a₁…a_k} = ∂_l S_{a₁…a_k} − Σ_j Γ^m_{l a_j} S_{a₁…m…a_k}`.
///
/// The derivative index comes first. The result has one jet order less than
/// the lower of the inputs.
pub fn covariant_derivative(s: &TensorField, gamma: &Christoffel) -> TensorField {
    let k = s.rank;
    let rank = k + 1;
    let comps = (0..1usize << rank)
        .map(|n| {
            let l = digit(n, rank, 0);
            let inner = n & ((1 << k) - 1);
            let mut acc = s.comps[inner].partial(l);
            for pos in 0..k {
                let a = digit(inner, k, pos);
                for m in 0..2 {
                    let other = with_digit(inner, k, pos, m);
                    acc -= gamma.0[m][l][a] * s.comps[other];
                }
            }
            acc
        })
        .collect();
    TensorField { rank, comps }
}

/// Contraction of the first two slots with the inverse metric:
/// `g^{lm} S_{l m a₃…}`.
pub fn trace_first_two(s: &TensorField, ginv: &[[Jet2; 2]; 2]) -> TensorField {
    assert!(s.rank >= 2);
    let rank = s.rank - 2;
    let comps = (0..1usize << rank)
        .map(|rest| {
            let mut acc = ginv[0][0] * s.comps[rest];
            for (l, m) in [(0usize, 1usize), (1, 0), (1, 1)] {
                acc += ginv[l][m] * s.comps[((l << 1 | m) << rank) | rest];
            }
            acc
        })
        .collect();
    TensorField { rank, comps }
}

/// `(∇*S)_{a₂…a_k} = −g^{lm}(∇S)_{l m a₂…a_k}` given `∇S`.
pub fn adjoint_of_derivative(nabla_s: &TensorField, ginv: &[[Jet2; 2]; 2]) -> TensorField {
    let t = trace_first_two(nabla_s, ginv);
    TensorField {
        rank: t.rank,
        comps: t.comps.iter().map(|j| -*j).collect(),
    }
}

/// Point values of a covariant tensor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tensor {
    pub rank: usize,
    pub data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(rank: usize) -> Self {
        Tensor {
            rank,
            data: vec![0.0; 1 << rank],
        }
    }

    pub fn from_fn(rank: usize, f: impl Fn(&[usize]) -> f64) -> Self {
        let mut idx = vec![0usize; rank];
        let data = (0..1usize << rank)
            .map(|n| {
                for (pos, slot) in idx.iter_mut().enumerate() {
                    *slot = digit(n, rank, pos);
                }
                f(&idx)
            })
            .collect();
        Tensor { rank, data }
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[flat_index(idx)]
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.rank, other.rank);
        Tensor {
            rank: self.rank,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.rank, other.rank);
        Tensor {
            rank: self.rank,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Tensor {
        Tensor {
            rank: self.rank,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Applies `m` to every slot: `S'_{a…} = m_a^b ⋯ S_{b…}`.
    pub fn transformed(&self, m: &[[f64; 2]; 2]) -> Tensor {
        let mut cur = self.data.clone();
        for pos in 0..self.rank {
            let next = (0..cur.len())
                .map(|n| {
                    let a = digit(n, self.rank, pos);
                    (0..2)
                        .map(|b| m[a][b] * cur[with_digit(n, self.rank, pos, b)])
                        .sum()
                })
                .collect();
            cur = next;
        }
        Tensor {
            rank: self.rank,
            data: cur,
        }
    }

    /// All indices raised with `g^{ab}`.
    pub fn raised(&self, ginv: &[[f64; 2]; 2]) -> Tensor {
        self.transformed(ginv)
    }

    /// Pullback through a coordinate change with Jacobian
    /// `jac[b][a] = ∂x'^b/∂x^a`.
    pub fn pulled_back(&self, jac: &[[f64; 2]; 2]) -> Tensor {
        self.transformed(&[[jac[0][0], jac[1][0]], [jac[0][1], jac[1][1]]])
    }

    /// Full metric inner product `⟨S, T⟩ = S_{a…} T^{a…}`.
    pub fn inner(&self, other: &Tensor, ginv: &[[f64; 2]; 2]) -> f64 {
        assert_eq!(self.rank, other.rank);
        let up = other.raised(ginv);
        self.data.iter().zip(&up.data).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self, ginv: &[[f64; 2]; 2]) -> f64 {
        self.inner(self, ginv).max(0.0)
    }

    pub fn norm(&self, ginv: &[[f64; 2]; 2]) -> f64 {
        self.norm_sq(ginv).sqrt()
    }

    /// Largest difference between the tensor and its image under swapping two
    /// slots.
    pub fn max_swap_defect(&self, p: usize, q: usize) -> f64 {
        (0..self.data.len())
            .map(|n| {
                let a = digit(n, self.rank, p);
                let b = digit(n, self.rank, q);
                let swapped = with_digit(with_digit(n, self.rank, p, b), self.rank, q, a);
                (self.data[n] - self.data[swapped]).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Average over all permutations of the slots.
    pub fn symmetrized(&self) -> Tensor {
        let perms = permutations(self.rank);
        let count = perms.len() as f64;
        Tensor::from_fn(self.rank, |idx| {
            perms
                .iter()
                .map(|p| {
                    let permuted: Vec<usize> = p.iter().map(|&k| idx[k]).collect();
                    self.get(&permuted)
                })
                .sum::<f64>()
                / count
        })
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Inverse of a symmetric 2×2 matrix of values.
pub fn inverse2(g: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    [
        [g[1][1] / det, -g[0][1] / det],
        [-g[1][0] / det, g[0][0] / det],
    ]
}
