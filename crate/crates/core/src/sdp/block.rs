use nalgebra::{DMatrix, DVector};

/// Shape of one diagonal block of an SDP variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    /// Dense symmetric block constrained to the PSD cone.
    Psd(usize),
    /// `s` independent nonnegative scalars.
    Nonneg(usize),
}

impl BlockKind {
    pub fn size(self) -> usize {
        match self {
            BlockKind::Psd(s) | BlockKind::Nonneg(s) => s,
        }
    }
}

/// Data for one block.
#[derive(Debug, Clone, PartialEq)]
pub enum Block {
    Dense(DMatrix<f64>),
    Diag(DVector<f64>),
}

impl Block {
    pub fn zeros(kind: BlockKind) -> Self {
        match kind {
            BlockKind::Psd(s) => Block::Dense(DMatrix::zeros(s, s)),
            BlockKind::Nonneg(s) => Block::Diag(DVector::zeros(s)),
        }
    }

    pub fn identity(kind: BlockKind) -> Self {
        match kind {
            BlockKind::Psd(s) => Block::Dense(DMatrix::identity(s, s)),
            BlockKind::Nonneg(s) => Block::Diag(DVector::from_element(s, 1.0)),
        }
    }

    pub fn kind(&self) -> BlockKind {
        match self {
            Block::Dense(m) => BlockKind::Psd(m.nrows()),
            Block::Diag(v) => BlockKind::Nonneg(v.len()),
        }
    }

    pub fn inner(&self, other: &Block) -> f64 {
        match (self, other) {
            (Block::Dense(a), Block::Dense(b)) => a.dot(b),
            (Block::Diag(a), Block::Diag(b)) => a.dot(b),
            _ => panic!("block kind mismatch"),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        match self {
            Block::Dense(a) => a.norm_squared(),
            Block::Diag(a) => a.norm_squared(),
        }
    }

    fn axpy(&mut self, alpha: f64, x: &Block) {
        match (self, x) {
            (Block::Dense(a), Block::Dense(b)) => *a += b * alpha,
            (Block::Diag(a), Block::Diag(b)) => a.axpy(alpha, b, 1.0),
            _ => panic!("block kind mismatch"),
        }
    }

    fn is_finite(&self) -> bool {
        match self {
            Block::Dense(a) => a.iter().all(|v| v.is_finite()),
            Block::Diag(a) => a.iter().all(|v| v.is_finite()),
        }
    }
}

/// Block-diagonal symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    pub blocks: Vec<Block>,
}

impl BlockMatrix {
    pub fn new(blocks: Vec<Block>) -> Self {
        Self { blocks }
    }

    pub fn zeros(kinds: &[BlockKind]) -> Self {
        Self { blocks: kinds.iter().map(|&k| Block::zeros(k)).collect() }
    }

    pub fn identity(kinds: &[BlockKind]) -> Self {
        Self { blocks: kinds.iter().map(|&k| Block::identity(k)).collect() }
    }

    pub fn kinds(&self) -> Vec<BlockKind> {
        self.blocks.iter().map(Block::kind).collect()
    }

    /// Trace inner product `Σ_blocks tr(AᵀB)`.
    pub fn inner(&self, other: &BlockMatrix) -> f64 {
        self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.inner(b)).sum()
    }

    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(Block::norm_sqr).sum::<f64>().sqrt()
    }

    /// `self ← self + alpha·x`.
    pub fn axpy(&mut self, alpha: f64, x: &BlockMatrix) {
        for (a, b) in self.blocks.iter_mut().zip(&x.blocks) {
            a.axpy(alpha, b);
        }
    }

    pub fn scaled(&self, alpha: f64) -> BlockMatrix {
        let mut out = BlockMatrix::zeros(&self.kinds());
        out.axpy(alpha, self);
        out
    }

    pub fn is_finite(&self) -> bool {
        self.blocks.iter().all(Block::is_finite)
    }

    /// Largest asymmetry `|M_ij − M_ji|` over dense blocks.
    pub fn max_asymmetry(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| match b {
                Block::Dense(m) => (m - m.transpose()).amax(),
                Block::Diag(_) => 0.0,
            })
            .fold(0.0, f64::max)
    }

    pub fn symmetrize(&mut self) {
        for b in &mut self.blocks {
            if let Block::Dense(m) = b {
                let t = m.transpose();
                *m += t;
                *m *= 0.5;
            }
        }
    }

    /// Smallest eigenvalue over all blocks (entries for scalar blocks).
    pub fn min_eigenvalue(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| match b {
                Block::Dense(m) if m.nrows() > 0 => m.clone().symmetric_eigenvalues().min(),
                Block::Diag(v) if !v.is_empty() => v.min(),
                _ => f64::INFINITY,
            })
            .fold(f64::INFINITY, f64::min)
    }
}
