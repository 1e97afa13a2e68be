//! Group homology in degrees 0..=2 with coefficients in finite-dimensional
//! F_p[G]-modules, computed from the bar complex.
//!
//! Chains in degree n are M tensor the free module on n-tuples of group
//! elements, with boundary
//!
//! ```text
//! d(m ⊗ [g1|...|gn]) = m·g1 ⊗ [g2|...|gn]
//!                    + sum_i (-1)^i m ⊗ [...|g_i g_{i+1}|...]
//!                    + (-1)^n m ⊗ [g1|...|g_{n-1}]
//! ```
//!
//! where `m·g` is the right action `action(g^-1) m`. The default complex is
//! the normalized one: tuples containing the identity are quotiented out,
//! shrinking degree n from |G|^n to (|G|-1)^n basis tuples without changing
//! homology. The unnormalized complex is kept for cross-checking only.
//!
//! The chain basis is ordered lexicographically in (tuple, module index):
//! chain index = tuple rank * dim + module index, with tuples ranked
//! lexicographically over the element alphabet in index order.
//!
//! Boundary matrices in the top degree are never materialized; their
//! columns are streamed into an incremental echelon form, which keeps the
//! degree-2 computations inside the configured size cap affordable.

use crate::fpalgebra::{FpError, IntegerMatrix, PrimeFieldMatrix, RowEchelon};
use crate::groups::{FiniteGroup, Subgroup, DEFAULT_MAX_ORDER};
use num_bigint::BigInt;
use num_traits::Zero;
use std::sync::Arc;
use thiserror::Error;

/// Caps that keep bar-complex sizes bounded. `max_chain` bounds the number
/// of basis chains in any degree actually touched; exceeding it is a clean
/// error, never an approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeCaps {
    pub max_order: usize,
    pub max_chain: usize,
}

impl Default for SizeCaps {
    fn default() -> Self {
        Self { max_order: DEFAULT_MAX_ORDER, max_chain: 1 << 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("chain space of dimension {needed} exceeds the cap {cap}")]
    SizeCapExceeded { needed: usize, cap: usize },
    #[error("matrix of {rows}x{cols} entries is too large to materialize")]
    TooLargeToMaterialize { rows: usize, cols: usize },
    #[error("morphism matrix is not equivariant")]
    NonEquivariant,
    #[error("degree {0} is outside the supported range")]
    DegreeOutOfRange(usize),
    #[error("the subgroup list must be nonempty")]
    EmptySubgroupList,
    #[error("subgroup does not belong to this group")]
    SubgroupMismatch,
    #[error("modules live over different groups or primes")]
    ModuleMismatch,
    #[error(transparent)]
    Fp(#[from] FpError),
}

/// Which bar complex to use; `Normalized` is the default everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BarFlavor {
    #[default]
    Normalized,
    Unnormalized,
}

/// A finite-dimensional F_p[G]-module: one invertible action matrix per
/// group element, with `action(identity) = I` and the homomorphism law
/// `action(a*b) = action(a) action(b)`.
#[derive(Debug, Clone)]
pub struct GModule {
    group: Arc<FiniteGroup>,
    p: u64,
    dim: usize,
    action: Vec<PrimeFieldMatrix>,
}

/// Description of a module to build over a fixed group and prime.
#[derive(Debug, Clone)]
pub enum ModuleSpec {
    Trivial,
    Permutation(Subgroup),
    DirectSum(Vec<ModuleSpec>),
    Kernel(Box<ModuleMorphism>),
}

impl GModule {
    pub fn build(
        group: &Arc<FiniteGroup>,
        p: u64,
        spec: &ModuleSpec,
    ) -> Result<Self, HomologyError> {
        match spec {
            ModuleSpec::Trivial => Ok(Self::trivial(group, p)),
            ModuleSpec::Permutation(h) => Self::permutation(group, p, h),
            ModuleSpec::DirectSum(parts) => {
                let built: Vec<GModule> = parts
                    .iter()
                    .map(|s| Self::build(group, p, s))
                    .collect::<Result<_, _>>()?;
                Self::direct_sum(&built)
            }
            ModuleSpec::Kernel(f) => Self::kernel_of(f),
        }
    }

    /// The one-dimensional module with every element acting as the identity.
    pub fn trivial(group: &Arc<FiniteGroup>, p: u64) -> Self {
        let action = vec![PrimeFieldMatrix::identity(1, p); group.order()];
        Self { group: Arc::clone(group), p, dim: 1, action }
    }

    /// k[G/H]: basis indexed by the left cosets of H in canonical order
    /// (minimal element per coset); g sends the coset xH to gxH.
    pub fn permutation(
        group: &Arc<FiniteGroup>,
        p: u64,
        subgroup: &Subgroup,
    ) -> Result<Self, HomologyError> {
        if subgroup.parent().as_ref() != group.as_ref() {
            return Err(HomologyError::SubgroupMismatch);
        }
        let cosets = subgroup.left_cosets();
        let dim = cosets.len();
        let mut coset_of = vec![usize::MAX; group.order()];
        for (i, coset) in cosets.iter().enumerate() {
            for &x in coset {
                coset_of[x] = i;
            }
        }
        let action = (0..group.order())
            .map(|g| {
                let mut m = PrimeFieldMatrix::zero(dim, dim, p);
                for (j, coset) in cosets.iter().enumerate() {
                    m.set(coset_of[group.mul(g, coset[0])], j, 1);
                }
                m
            })
            .collect();
        Ok(Self { group: Arc::clone(group), p, dim, action })
    }

    /// The regular representation k[G].
    pub fn regular(group: &Arc<FiniteGroup>, p: u64) -> Self {
        let h = crate::groups::subgroup_generated(group, &[]).expect("trivial subgroup");
        Self::permutation(group, p, &h).expect("subgroup of its own parent")
    }

    /// Block-diagonal sum; all summands must share the group and prime.
    pub fn direct_sum(parts: &[GModule]) -> Result<Self, HomologyError> {
        let first = parts.first().ok_or(HomologyError::ModuleMismatch)?;
        if parts
            .iter()
            .any(|m| m.group.as_ref() != first.group.as_ref() || m.p != first.p)
        {
            return Err(HomologyError::ModuleMismatch);
        }
        let dim = parts.iter().map(|m| m.dim).sum();
        let action = (0..first.group.order())
            .map(|g| {
                let mut m = PrimeFieldMatrix::zero(dim, dim, first.p);
                let mut off = 0;
                for part in parts {
                    for r in 0..part.dim {
                        for c in 0..part.dim {
                            let v = part.action[g].get(r, c);
                            if v != 0 {
                                m.set(off + r, off + c, v);
                            }
                        }
                    }
                    off += part.dim;
                }
                m
            })
            .collect();
        Ok(Self { group: Arc::clone(&first.group), p: first.p, dim, action })
    }

    /// The kernel of a morphism, with the action restricted to a basis of
    /// the kernel subspace (well defined by equivariance).
    pub fn kernel_of(f: &ModuleMorphism) -> Result<Self, HomologyError> {
        let source = &f.source;
        let basis = f.matrix.nullspace();
        let dim = basis.len();
        let p = source.p;
        // kernel basis as columns of an (source.dim x dim) matrix
        let mut n = PrimeFieldMatrix::zero(source.dim, dim, p);
        for (c, v) in basis.iter().enumerate() {
            for (r, &x) in v.iter().enumerate() {
                if x != 0 {
                    n.set(r, c, x);
                }
            }
        }
        let action = (0..source.group.order())
            .map(|g| {
                let gn = source.action[g].mul(&n)?;
                let x = n
                    .solve(&gn)?
                    .expect("equivariance keeps the kernel stable");
                Ok::<_, HomologyError>(x)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { group: Arc::clone(&source.group), p, dim, action })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, g: usize) -> &PrimeFieldMatrix {
        &self.action[g]
    }

    /// Exhaustive check of the module laws; used by tests and callers that
    /// assemble actions by hand.
    pub fn validate(&self) -> Result<(), HomologyError> {
        let n = self.group.order();
        if self.action.len() != n {
            return Err(HomologyError::ModuleMismatch);
        }
        if self.action[0] != PrimeFieldMatrix::identity(self.dim, self.p) {
            return Err(HomologyError::ModuleMismatch);
        }
        for a in 0..n {
            if self.action[a].rank() != self.dim {
                return Err(HomologyError::ModuleMismatch);
            }
            for b in 0..n {
                if self.action[self.group.mul(a, b)] != self.action[a].mul(&self.action[b])? {
                    return Err(HomologyError::ModuleMismatch);
                }
            }
        }
        Ok(())
    }
}

/// An equivariant linear map between modules over the same group and prime.
#[derive(Debug, Clone)]
pub struct ModuleMorphism {
    source: GModule,
    target: GModule,
    /// target.dim x source.dim
    matrix: PrimeFieldMatrix,
}

impl ModuleMorphism {
    pub fn new(
        source: GModule,
        target: GModule,
        matrix: PrimeFieldMatrix,
    ) -> Result<Self, HomologyError> {
        if source.group.as_ref() != target.group.as_ref() || source.p != target.p {
            return Err(HomologyError::ModuleMismatch);
        }
        if matrix.rows() != target.dim || matrix.cols() != source.dim || matrix.modulus() != source.p
        {
            return Err(HomologyError::ModuleMismatch);
        }
        for g in 0..source.group.order() {
            if matrix.mul(&source.action[g])? != target.action[g].mul(&matrix)? {
                return Err(HomologyError::NonEquivariant);
            }
        }
        Ok(Self { source, target, matrix })
    }

    pub fn identity(module: &GModule) -> Self {
        Self {
            source: module.clone(),
            target: module.clone(),
            matrix: PrimeFieldMatrix::identity(module.dim, module.p),
        }
    }

    pub fn zero(source: &GModule, target: &GModule) -> Result<Self, HomologyError> {
        Self::new(
            source.clone(),
            target.clone(),
            PrimeFieldMatrix::zero(target.dim, source.dim, source.p),
        )
    }

    pub fn source(&self) -> &GModule {
        &self.source
    }

    pub fn target(&self) -> &GModule {
        &self.target
    }

    pub fn matrix(&self) -> &PrimeFieldMatrix {
        &self.matrix
    }
}

/// The summation map Phi from the direct sum of the coset modules k[G/G_i]
/// to the trivial module: every coset basis vector goes to 1. Surjective by
/// construction; its matrix is the all-ones row.
pub fn build_phi_morphism(
    group: &Arc<FiniteGroup>,
    p: u64,
    subgroups: &[Subgroup],
) -> Result<ModuleMorphism, HomologyError> {
    if subgroups.is_empty() {
        return Err(HomologyError::EmptySubgroupList);
    }
    let parts: Vec<GModule> = subgroups
        .iter()
        .map(|h| GModule::permutation(group, p, h))
        .collect::<Result<_, _>>()?;
    let source = GModule::direct_sum(&parts)?;
    let target = GModule::trivial(group, p);
    let matrix = PrimeFieldMatrix::new(1, source.dim, p, vec![1; source.dim])?;
    ModuleMorphism::new(source, target, matrix)
}

/// Bar-complex machinery for one module and flavor. Columns of the
/// boundary matrices are generated on demand.
pub(crate) struct BarComplex<'a> {
    module: &'a GModule,
    flavor: BarFlavor,
    /// tuple alphabet: non-identity elements for the normalized complex
    alphabet: Vec<usize>,
    /// sparse columns of action(g^-1), indexed by group element
    right_cols: Vec<Vec<Vec<(usize, u64)>>>,
}

impl<'a> BarComplex<'a> {
    pub fn new(module: &'a GModule, flavor: BarFlavor) -> Self {
        let order = module.group.order();
        let alphabet: Vec<usize> = match flavor {
            BarFlavor::Normalized => (1..order).collect(),
            BarFlavor::Unnormalized => (0..order).collect(),
        };
        let right_cols = (0..order)
            .map(|g| {
                let m = &module.action[module.group.inv(g)];
                (0..module.dim)
                    .map(|j| {
                        (0..module.dim)
                            .filter_map(|i| {
                                let v = m.get(i, j);
                                (v != 0).then_some((i, v))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self { module, flavor, alphabet, right_cols }
    }

    /// position of a group element in the tuple alphabet, or None for the
    /// identity in the normalized complex
    #[inline]
    fn pos(&self, e: usize) -> Option<usize> {
        match self.flavor {
            BarFlavor::Normalized => (e != 0).then(|| e - 1),
            BarFlavor::Unnormalized => Some(e),
        }
    }

    pub fn chain_dim(&self, n: usize) -> usize {
        if n == 0 {
            return self.module.dim;
        }
        self.alphabet.len().pow(n as u32) * self.module.dim
    }

    pub fn alphabet_len(&self) -> usize {
        self.alphabet.len()
    }

    fn check_cap(&self, n: usize, caps: &SizeCaps) -> Result<(), HomologyError> {
        let needed = self.chain_dim(n);
        if needed > caps.max_chain {
            return Err(HomologyError::SizeCapExceeded { needed, cap: caps.max_chain });
        }
        Ok(())
    }

    fn unrank_tuple(&self, n: usize, mut rank: usize) -> Vec<usize> {
        let base = self.alphabet.len();
        let mut tuple = vec![0usize; n];
        for k in (0..n).rev() {
            tuple[k] = self.alphabet[rank % base];
            rank /= base;
        }
        tuple
    }

    fn rank_tuple(&self, tuple: &[usize]) -> usize {
        let base = self.alphabet.len();
        tuple.iter().fold(0, |acc, &e| acc * base + self.pos(e).expect("element in alphabet"))
    }

    /// Sparse column `col` of the degree-n boundary matrix. Entries may
    /// repeat a row; consumers accumulate them mod p.
    fn column(&self, n: usize, col: usize, out: &mut Vec<(usize, u64)>) {
        out.clear();
        let dim = self.module.dim;
        let p = self.module.p;
        let j = col % dim;
        let tuple = self.unrank_tuple(n, col / dim);
        let neg = p - 1;
        // m·g1 ⊗ [g2|...|gn]
        let tail_rank = self.rank_tuple(&tuple[1..]);
        for &(i, v) in &self.right_cols[tuple[0]][j] {
            out.push((tail_rank * dim + i, v));
        }
        // (-1)^i m ⊗ [...|g_i g_{i+1}|...]
        for i in 1..n {
            let prod = self.module.group.mul(tuple[i - 1], tuple[i]);
            let Some(_) = self.pos(prod) else {
                continue; // degenerate in the normalized complex
            };
            let mut merged = Vec::with_capacity(n - 1);
            merged.extend_from_slice(&tuple[..i - 1]);
            merged.push(prod);
            merged.extend_from_slice(&tuple[i + 1..]);
            let coeff = if i % 2 == 1 { neg } else { 1 };
            out.push((self.rank_tuple(&merged) * dim + j, coeff));
        }
        // (-1)^n m ⊗ [g1|...|g_{n-1}]
        let head_rank = self.rank_tuple(&tuple[..n - 1]);
        let coeff = if n % 2 == 1 { neg } else { 1 };
        out.push((head_rank * dim + j, coeff));
    }

    /// Materialized boundary matrix; only for sizes a dense matrix can hold.
    pub fn boundary_matrix(
        &self,
        n: usize,
        caps: &SizeCaps,
    ) -> Result<PrimeFieldMatrix, HomologyError> {
        if n == 0 || n > 3 {
            return Err(HomologyError::DegreeOutOfRange(n));
        }
        self.check_cap(n, caps)?;
        let rows = self.chain_dim(n - 1);
        let cols = self.chain_dim(n);
        if rows.saturating_mul(cols) > (1 << 24) {
            return Err(HomologyError::TooLargeToMaterialize { rows, cols });
        }
        let p = self.module.p;
        let mut m = PrimeFieldMatrix::zero(rows, cols, p);
        let mut buf = Vec::new();
        for c in 0..cols {
            self.column(n, c, &mut buf);
            for &(r, v) in &buf {
                m.set(r, c, (m.get(r, c) + v) % p);
            }
        }
        Ok(m)
    }

    /// Rank of the degree-n boundary, streaming columns.
    pub fn boundary_rank(&self, n: usize, caps: &SizeCaps) -> Result<usize, HomologyError> {
        if n == 0 || n > 3 {
            return Err(HomologyError::DegreeOutOfRange(n));
        }
        self.check_cap(n, caps)?;
        let rows = self.chain_dim(n - 1);
        let cols = self.chain_dim(n);
        if rows == 0 || cols == 0 {
            return Ok(0);
        }
        let mut ech = RowEchelon::new(self.module.p, rows);
        let mut buf = Vec::new();
        for c in 0..cols {
            if ech.is_full() {
                break;
            }
            self.column(n, c, &mut buf);
            ech.insert_sparse(&buf);
        }
        Ok(ech.rank())
    }

    /// Stream the degree-n boundary columns into an existing echelon form.
    pub fn feed_boundary(
        &self,
        n: usize,
        ech: &mut RowEchelon,
        caps: &SizeCaps,
    ) -> Result<(), HomologyError> {
        self.check_cap(n, caps)?;
        let cols = self.chain_dim(n);
        let mut buf = Vec::new();
        for c in 0..cols {
            if ech.is_full() {
                break;
            }
            self.column(n, c, &mut buf);
            ech.insert_sparse(&buf);
        }
        Ok(())
    }

    /// Basis of the cycle space in degree n (all of C_0 when n = 0).
    pub fn cycles(&self, n: usize, caps: &SizeCaps) -> Result<Vec<Vec<u64>>, HomologyError> {
        if n == 0 {
            let dim = self.module.dim;
            return Ok((0..dim)
                .map(|i| {
                    let mut v = vec![0u64; dim];
                    v[i] = 1;
                    v
                })
                .collect());
        }
        Ok(self.boundary_matrix(n, caps)?.nullspace())
    }
}

/// dim H_n(G, M) for 0 <= n <= 2, by the chosen bar complex.
pub fn homology_dim_flavored(
    module: &GModule,
    n: usize,
    flavor: BarFlavor,
    caps: &SizeCaps,
) -> Result<usize, HomologyError> {
    if n > 2 {
        return Err(HomologyError::DegreeOutOfRange(n));
    }
    if module.dim == 0 {
        return Ok(0);
    }
    let bar = BarComplex::new(module, flavor);
    let kernel_dim = if n == 0 {
        module.dim
    } else {
        bar.chain_dim(n) - bar.boundary_rank(n, caps)?
    };
    let image_rank = bar.boundary_rank(n + 1, caps)?;
    Ok(kernel_dim - image_rank)
}

/// dim H_n(G, M) with the default (normalized) complex.
pub fn homology_dim(module: &GModule, n: usize, caps: &SizeCaps) -> Result<usize, HomologyError> {
    homology_dim_flavored(module, n, BarFlavor::Normalized, caps)
}

/// dim of the covariants M_G = M / span{ g·v - v }; equals H_0(G, M).
pub fn coinvariants_dim(module: &GModule, caps: &SizeCaps) -> Result<usize, HomologyError> {
    homology_dim(module, 0, caps)
}

/// The degree-n boundary matrix of the normalized bar complex.
pub fn bar_boundary(
    module: &GModule,
    n: usize,
    caps: &SizeCaps,
) -> Result<PrimeFieldMatrix, HomologyError> {
    BarComplex::new(module, BarFlavor::Normalized).boundary_matrix(n, caps)
}

/// Rank of the map induced on H_n by a module morphism, together with the
/// homology dimensions of source and target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InducedMapRank {
    pub rank: usize,
    pub source_dim: usize,
    pub target_dim: usize,
}

/// Push a basis of source cycles through the chain map induced by `f`
/// (apply `f` to the module factor in every degree) and measure the rank
/// of the images modulo target boundaries.
pub fn induced_homology_map_rank(
    f: &ModuleMorphism,
    n: usize,
    caps: &SizeCaps,
) -> Result<InducedMapRank, HomologyError> {
    induced_homology_map_rank_flavored(f, n, BarFlavor::Normalized, caps)
}

pub fn induced_homology_map_rank_flavored(
    f: &ModuleMorphism,
    n: usize,
    flavor: BarFlavor,
    caps: &SizeCaps,
) -> Result<InducedMapRank, HomologyError> {
    if n > 2 {
        return Err(HomologyError::DegreeOutOfRange(n));
    }
    let source_dim = homology_dim_flavored(&f.source, n, flavor, caps)?;
    let target_dim = homology_dim_flavored(&f.target, n, flavor, caps)?;
    if f.source.dim == 0 || f.target.dim == 0 {
        return Ok(InducedMapRank { rank: 0, source_dim, target_dim });
    }
    let src = BarComplex::new(&f.source, flavor);
    let tgt = BarComplex::new(&f.target, flavor);
    let cycles = src.cycles(n, caps)?;
    let rows = tgt.chain_dim(n);
    let mut ech = RowEchelon::new(f.source.p, rows);
    // boundaries of the target first; extra pivots from pushed cycles are
    // exactly the rank of the induced map
    tgt.feed_boundary(n + 1, &mut ech, caps)?;
    let mut rank = 0;
    let tuples = if n == 0 { 1 } else { src.alphabet.len().pow(n as u32) };
    let (sd, td) = (f.source.dim, f.target.dim);
    let p = f.source.p;
    for z in &cycles {
        let mut w = vec![0u64; rows];
        for t in 0..tuples {
            for a in 0..td {
                let mut acc = 0u64;
                for j in 0..sd {
                    let c = f.matrix.get(a, j);
                    if c != 0 {
                        acc = (acc + c * z[t * sd + j]) % p;
                    }
                }
                w[t * td + a] = acc;
            }
        }
        if ech.insert_dense(&w) {
            rank += 1;
        }
    }
    Ok(InducedMapRank { rank, source_dim, target_dim })
}

/// dim of (integral H_2 of G) tensor F_p, from the Smith normal form of
/// the integral bar boundaries in degrees 2-3: a lattice basis of the
/// degree-2 cycles comes from the column transform of the SNF of the
/// boundary, the degree-3 boundary is rewritten in those coordinates, and
/// the invariant factors of the rewritten matrix present the homology.
pub fn integral_h2_mod_p(
    group: &Arc<FiniteGroup>,
    p: u64,
    caps: &SizeCaps,
) -> Result<usize, HomologyError> {
    let order = group.order();
    if order == 1 {
        return Ok(0);
    }
    let a = order - 1; // normalized alphabet size
    let (c1, c2, c3) = (a, a * a, a * a * a);
    if c3 > caps.max_chain {
        return Err(HomologyError::SizeCapExceeded { needed: c3, cap: caps.max_chain });
    }
    let d2 = integral_bar_boundary(group, 2, c1, c2);
    let d3 = integral_bar_boundary(group, 3, c2, c3);
    let snf2 = d2.snf_with_transform();
    let rank2 = snf2.diagonal.iter().filter(|d| !d.is_zero()).count();
    let kernel_dim = c2 - rank2;
    if kernel_dim == 0 {
        return Ok(0);
    }
    // rows of v^-1 * d3 past the rank express im(d3) in kernel coordinates
    let coords = snf2.v_inv.expect("transform requested").mul(&d3)?;
    let mut relations = IntegerMatrix::zero(kernel_dim, c3);
    for r in 0..kernel_dim {
        for c in 0..c3 {
            relations.set(r, c, coords.get(rank2 + r, c).clone());
        }
    }
    // im(d3) lies inside ker(d2), so the leading coordinate rows vanish
    debug_assert!((0..rank2).all(|r| (0..c3).all(|c| coords.get(r, c).is_zero())));
    let factors = relations.smith_normal_form();
    let big_p = BigInt::from(p);
    let mut dim = factors.iter().filter(|d| (&**d % &big_p).is_zero()).count();
    dim += kernel_dim.saturating_sub(factors.len());
    Ok(dim)
}

/// Integral bar boundary with trivial Z coefficients, normalized flavor.
fn integral_bar_boundary(
    group: &FiniteGroup,
    n: usize,
    rows: usize,
    cols: usize,
) -> IntegerMatrix {
    let perm: Vec<Vec<usize>> = (0..group.order()).map(|_| vec![0]).collect();
    integral_bar_boundary_perm(group, &perm, 1, n, rows, cols)
}

/// Integral bar boundary of a permutation module Z[G/H], normalized
/// flavor. `right_perm[g][j]` is the basis index of `action(g^-1) e_j`.
fn integral_bar_boundary_perm(
    group: &FiniteGroup,
    right_perm: &[Vec<usize>],
    dim: usize,
    n: usize,
    rows: usize,
    cols: usize,
) -> IntegerMatrix {
    let a = group.order() - 1;
    let unrank = |mut rank: usize, len: usize| -> Vec<usize> {
        let mut tuple = vec![0usize; len];
        for k in (0..len).rev() {
            tuple[k] = rank % a + 1;
            rank /= a;
        }
        tuple
    };
    let rank_tuple =
        |tuple: &[usize]| -> usize { tuple.iter().fold(0, |acc, &e| acc * a + (e - 1)) };
    let mut m = IntegerMatrix::zero(rows, cols);
    for c in 0..cols {
        let j = c % dim;
        let tuple = unrank(c / dim, n);
        let mut add = |row: usize, delta: i64| {
            let cur = m.get(row, c) + BigInt::from(delta);
            m.set(row, c, cur);
        };
        add(rank_tuple(&tuple[1..]) * dim + right_perm[tuple[0]][j], 1);
        for i in 1..n {
            let prod = group.mul(tuple[i - 1], tuple[i]);
            if prod == 0 {
                continue;
            }
            let mut merged = Vec::with_capacity(n - 1);
            merged.extend_from_slice(&tuple[..i - 1]);
            merged.push(prod);
            merged.extend_from_slice(&tuple[i + 1..]);
            add(rank_tuple(&merged) * dim + j, if i % 2 == 1 { -1 } else { 1 });
        }
        add(rank_tuple(&tuple[..n - 1]) * dim + j, if n % 2 == 1 { -1 } else { 1 });
    }
    m
}

/// For each group element g, the permutation `j -> action(g^-1) e_j` of
/// the coset basis of Z[G/H].
fn coset_right_perm(group: &FiniteGroup, subgroup: &Subgroup) -> Vec<Vec<usize>> {
    let cosets = subgroup.left_cosets();
    let mut coset_of = vec![usize::MAX; group.order()];
    for (i, coset) in cosets.iter().enumerate() {
        for &x in coset {
            coset_of[x] = i;
        }
    }
    (0..group.order())
        .map(|g| {
            let g_inv = group.inv(g);
            cosets.iter().map(|coset| coset_of[group.mul(g_inv, coset[0])]).collect()
        })
        .collect()
}

/// dim over F_p of the cokernel, tensored with F_p, of the map induced on
/// integral H_2 by the coset summation sum Z[G/G_i] -> Z.
///
/// The target H_2 is presented on a lattice basis of the degree-2 integral
/// cycles (from the SNF column transform of the degree-2 boundary) by the
/// degree-3 boundary; integral cycles of each summand are pushed through
/// the chain map and adjoined as extra relations, and the invariant
/// factors of the combined matrix divisible by p count the dimension.
pub fn integral_coker_psi1_mod_p(
    group: &Arc<FiniteGroup>,
    p: u64,
    subgroups: &[Subgroup],
    caps: &SizeCaps,
) -> Result<usize, HomologyError> {
    if subgroups.is_empty() {
        return Err(HomologyError::EmptySubgroupList);
    }
    let order = group.order();
    if order == 1 {
        return Ok(0);
    }
    let a = order - 1;
    let (c1, c2, c3) = (a, a * a, a * a * a);
    if c3 > caps.max_chain {
        return Err(HomologyError::SizeCapExceeded { needed: c3, cap: caps.max_chain });
    }
    // integral SNF transforms are dense; keep the lattice sizes modest
    let transform_limit = 1024usize;

    let d2_t = integral_bar_boundary(group, 2, c1, c2);
    let d3_t = integral_bar_boundary(group, 3, c2, c3);
    let snf_t = d2_t.snf_with_transform();
    let rank_t = snf_t.diagonal.iter().filter(|d| !d.is_zero()).count();
    let kernel_dim = c2 - rank_t;
    if kernel_dim == 0 {
        return Ok(0);
    }
    let v_inv_t = snf_t.v_inv.expect("transform requested");

    // relation columns: the degree-3 boundary, then the pushed cycles of
    // every summand
    let mut columns: Vec<Vec<BigInt>> = Vec::new();
    let coords = v_inv_t.mul(&d3_t)?;
    for c in 0..c3 {
        columns.push((0..kernel_dim).map(|r| coords.get(rank_t + r, c).clone()).collect());
    }
    for h in subgroups {
        if h.parent().as_ref() != group.as_ref() {
            return Err(HomologyError::SubgroupMismatch);
        }
        let dim = h.index();
        let (rows_s, cols_s) = (c1 * dim, c2 * dim);
        if cols_s > transform_limit {
            return Err(HomologyError::TooLargeToMaterialize { rows: cols_s, cols: cols_s });
        }
        let right_perm = coset_right_perm(group, h);
        let d2_s = integral_bar_boundary_perm(group, &right_perm, dim, 2, rows_s, cols_s);
        let snf_s = d2_s.snf_with_transform();
        let rank_s = snf_s.diagonal.iter().filter(|d| !d.is_zero()).count();
        let v_s = snf_s.v.expect("transform requested");
        for kc in rank_s..cols_s {
            // source cycle in chain coordinates
            let z: Vec<BigInt> = (0..cols_s).map(|r| v_s.get(r, kc).clone()).collect();
            // push through the all-ones augmentation, tuple block by block
            let mut w = IntegerMatrix::zero(c2, 1);
            for t in 0..c2 {
                let mut acc = BigInt::zero();
                for j in 0..dim {
                    acc += &z[t * dim + j];
                }
                w.set(t, 0, acc);
            }
            let u = v_inv_t.mul(&w)?;
            debug_assert!((0..rank_t).all(|r| u.get(r, 0).is_zero()));
            columns.push((0..kernel_dim).map(|r| u.get(rank_t + r, 0).clone()).collect());
        }
    }

    let mut relations = IntegerMatrix::zero(kernel_dim, columns.len());
    for (c, col) in columns.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            if !v.is_zero() {
                relations.set(r, c, v.clone());
            }
        }
    }
    let factors = relations.smith_normal_form();
    let big_p = BigInt::from(p);
    let mut dim = factors.iter().filter(|d| (&**d % &big_p).is_zero()).count();
    dim += kernel_dim.saturating_sub(factors.len());
    Ok(dim)
}
