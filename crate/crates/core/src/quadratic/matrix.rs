use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapProvenance {
    /// Built from the closed-form linearized polynomial L_b.
    ExplicitLb,
    /// Built from the bilinear form of a value table.
    BilinearGeneric,
}

/// A GF(2)-linear map on n-bit vectors, stored column-wise: `columns[j]` is
/// the image of the j-th basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearizedMap {
    n: u32,
    columns: Vec<u32>,
    provenance: MapProvenance,
}

impl LinearizedMap {
    pub fn from_columns(n: u32, columns: Vec<u32>, provenance: MapProvenance) -> Self {
        assert_eq!(columns.len(), n as usize, "need one column per basis vector");
        assert!(columns.iter().all(|c| c >> n == 0), "column wider than n bits");
        Self {
            n,
            columns,
            provenance,
        }
    }

    /// Matrix of an additive map given by its action on the basis.
    pub fn from_fn(n: u32, map: impl Fn(u32) -> u32, provenance: MapProvenance) -> Self {
        Self::from_columns(n, (0..n).map(|j| map(1 << j)).collect(), provenance)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn provenance(&self) -> MapProvenance {
        self.provenance
    }

    pub fn columns(&self) -> &[u32] {
        &self.columns
    }

    /// Row-major view: bit j of `rows()[i]` is entry (i, j).
    pub fn rows(&self) -> Vec<u32> {
        (0..self.n)
            .map(|i| {
                self.columns
                    .iter()
                    .enumerate()
                    .fold(0, |r, (j, c)| r | ((c >> i) & 1) << j)
            })
            .collect()
    }

    pub fn apply(&self, u: u32) -> u32 {
        let mut acc = 0;
        let mut rest = u;
        while rest != 0 {
            let j = rest.trailing_zeros();
            acc ^= self.columns[j as usize];
            rest &= rest - 1;
        }
        acc
    }

    /// Gaussian elimination over the columns, tracking which basis vectors
    /// were combined; every column that reduces to zero yields a kernel
    /// vector. Returns (independent column count, kernel basis).
    fn eliminate(&self) -> (u32, Vec<u32>) {
        // pivots[bit] = (reduced image with leading bit `bit`, combination)
        let mut pivots: [Option<(u32, u32)>; 32] = [None; 32];
        let mut kernel = vec![];
        let mut rank = 0;
        for (j, &col) in self.columns.iter().enumerate() {
            let mut v = col;
            let mut combo = 1u32 << j;
            while v != 0 {
                let top = 31 - v.leading_zeros();
                match pivots[top as usize] {
                    Some((pv, pc)) => {
                        v ^= pv;
                        combo ^= pc;
                    }
                    None => {
                        pivots[top as usize] = Some((v, combo));
                        rank += 1;
                        break;
                    }
                }
            }
            if v == 0 {
                kernel.push(combo);
            }
        }
        (rank, kernel)
    }

    pub fn rank(&self) -> u32 {
        self.eliminate().0
    }

    pub fn kernel_basis(&self) -> Vec<u32> {
        self.eliminate().1
    }

    pub fn kernel_dim(&self) -> u32 {
        self.kernel_basis().len() as u32
    }

    /// Every kernel element, ascending.
    pub fn kernel(&self) -> Vec<u32> {
        span(&self.kernel_basis())
    }
}

/// All GF(2) combinations of `basis`, ascending.
pub fn span(basis: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32];
    for &v in basis {
        let len = out.len();
        for idx in 0..len {
            out.push(out[idx] ^ v);
        }
    }
    out.sort_unstable();
    out
}
