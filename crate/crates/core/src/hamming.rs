//! The Hamming graph H(n,q): vertex codec, adjacency, line cliques, the
//! eigenvalue formula and the automorphism group action.
//!
//! Vertices are tuples over the alphabet `{0,..,q-1}` indexed big-endian:
//! `index = sum_k x_k * q^(n-1-k)`, coordinate `0` most significant.
//! Coordinates are numbered `0..n` throughout the crate.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported vertex count.
pub const MAX_VERTICES: u64 = 1 << 32;

/// The pair `(n, q)` defining H(n,q), with cached derived constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct GraphParams {
    n: usize,
    q: usize,
    vertex_count: usize,
    /// `strides[k] = q^(n-1-k)`
    strides: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    n: usize,
    q: usize,
}

impl TryFrom<RawParams> for GraphParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        GraphParams::new(raw.n, raw.q)
    }
}

impl From<GraphParams> for RawParams {
    fn from(p: GraphParams) -> Self {
        RawParams { n: p.n, q: p.q }
    }
}

impl GraphParams {
    pub fn new(n: usize, q: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams { n, q, reason: "n must be positive" });
        }
        if q < 2 {
            return Err(Error::InvalidParams { n, q, reason: "q must be at least 2" });
        }
        let mut count: u64 = 1;
        for _ in 0..n {
            count = count
                .checked_mul(q as u64)
                .filter(|&c| c <= MAX_VERTICES)
                .ok_or(Error::InvalidParams { n, q, reason: "q^n exceeds 2^32" })?;
        }
        let vertex_count = usize::try_from(count)
            .map_err(|_| Error::InvalidParams { n, q, reason: "q^n exceeds usize" })?;
        let mut strides = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * q;
        }
        Ok(GraphParams { n, q, vertex_count, strides })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Valency `n(q-1)`.
    #[inline]
    pub fn degree(&self) -> usize {
        self.n * (self.q - 1)
    }

    #[inline]
    pub fn stride(&self, k: usize) -> usize {
        self.strides[k]
    }

    /// `λ_i(n,q) = (q-1)n - qi`.
    pub fn eigenvalue(&self, i: usize) -> Result<i64> {
        if i > self.n {
            return Err(Error::EigenvalueIndexOutOfRange { index: i, n: self.n });
        }
        Ok((self.q as i64 - 1) * self.n as i64 - self.q as i64 * i as i64)
    }

    /// Index `i` with `λ_i(n,q) = λ`, if any.
    pub fn eigenvalue_index(&self, lambda: i64) -> Option<usize> {
        let top = (self.q as i64 - 1) * self.n as i64;
        let diff = top - lambda;
        if diff < 0 || diff % self.q as i64 != 0 {
            return None;
        }
        let i = (diff / self.q as i64) as usize;
        (i <= self.n).then_some(i)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.vertex_count {
            return Err(Error::VertexOutOfRange { index: v, count: self.vertex_count });
        }
        Ok(())
    }

    pub fn check_coord(&self, k: usize) -> Result<()> {
        if k >= self.n {
            return Err(Error::CoordinateOutOfRange { coord: k, n: self.n });
        }
        Ok(())
    }

    pub fn check_symbol(&self, a: usize) -> Result<()> {
        if a >= self.q {
            return Err(Error::SymbolOutOfRange { symbol: a, q: self.q });
        }
        Ok(())
    }

    pub fn encode(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.n {
            return Err(Error::TupleLength { got: tuple.len(), expected: self.n });
        }
        let mut v = 0;
        for &x in tuple {
            self.check_symbol(x)?;
            v = v * self.q + x;
        }
        Ok(v)
    }

    pub fn decode(&self, v: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        Ok((0..self.n).map(|k| self.digit(v, k)).collect())
    }

    /// Symbol at coordinate `k` of vertex `v`; no range checks.
    #[inline]
    pub fn digit(&self, v: usize, k: usize) -> usize {
        (v / self.strides[k]) % self.q
    }

    /// `v` with coordinate `k` replaced by `a`; no range checks.
    #[inline]
    pub fn with_digit(&self, v: usize, k: usize, a: usize) -> usize {
        let s = self.strides[k];
        v - self.digit(v, k) * s + a * s
    }

    /// Neighbors of `v` as `(coordinate, vertex)`, coordinate ascending,
    /// then replacement symbol ascending.
    pub fn neighbors(&self, v: usize) -> Result<Vec<(usize, usize)>> {
        self.check_vertex(v)?;
        Ok(self.neighbors_unchecked(v).collect())
    }

    pub(crate) fn neighbors_unchecked(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |k| {
            let cur = self.digit(v, k);
            (0..self.q)
                .filter(move |&a| a != cur)
                .map(move |a| (k, self.with_digit(v, k, a)))
        })
    }

    /// Full adjacency list, one row per vertex.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        (0..self.vertex_count)
            .map(|v| self.neighbors_unchecked(v).map(|(_, u)| u as u32).collect())
            .collect()
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        (0..self.n).filter(|&k| self.digit(u, k) != self.digit(v, k)).count() == 1
    }

    pub fn distance(&self, u: usize, v: usize) -> usize {
        (0..self.n).filter(|&k| self.digit(u, k) != self.digit(v, k)).count()
    }

    /// Maximal cliques of pairwise `k`-adjacent vertices: `q^(n-1)` disjoint
    /// lines of size `q`, ordered by their lowest vertex.
    pub fn line_cliques(&self, k: usize) -> Result<impl Iterator<Item = Vec<usize>> + '_> {
        self.check_coord(k)?;
        Ok((0..self.vertex_count)
            .filter(move |&v| self.digit(v, k) == 0)
            .map(move |v| (0..self.q).map(|a| v + a * self.strides[k]).collect()))
    }

    /// The single coordinate where `u` and `v` differ; `None` when they are
    /// equal or differ in more than one place.
    pub fn differing_coordinate(&self, u: usize, v: usize) -> Option<usize> {
        let mut found = None;
        for k in 0..self.n {
            if self.digit(u, k) != self.digit(v, k) {
                if found.is_some() {
                    return None;
                }
                found = Some(k);
            }
        }
        found
    }
}

/// An automorphism of H(n,q): coordinate `k` of the source is sent to
/// coordinate `coord_perm[k]` of the image, and the symbol there is mapped by
/// `symbol_perms[coord_perm[k]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Automorphism {
    coord_perm: Vec<usize>,
    symbol_perms: Vec<Vec<usize>>,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

impl Automorphism {
    pub fn new(params: &GraphParams, coord_perm: Vec<usize>, symbol_perms: Vec<Vec<usize>>) -> Result<Self> {
        if coord_perm.len() != params.n() || !is_permutation(&coord_perm) {
            return Err(Error::MalformedAutomorphism(format!(
                "coordinate permutation {coord_perm:?} is not a permutation of 0..{}",
                params.n()
            )));
        }
        if symbol_perms.len() != params.n() {
            return Err(Error::MalformedAutomorphism(format!(
                "expected {} symbol permutations, got {}",
                params.n(),
                symbol_perms.len()
            )));
        }
        for (k, p) in symbol_perms.iter().enumerate() {
            if p.len() != params.q() || !is_permutation(p) {
                return Err(Error::MalformedAutomorphism(format!(
                    "symbol permutation {p:?} at coordinate {k} is not a permutation of 0..{}",
                    params.q()
                )));
            }
        }
        Ok(Automorphism { coord_perm, symbol_perms })
    }

    pub fn identity(params: &GraphParams) -> Self {
        Automorphism {
            coord_perm: (0..params.n()).collect(),
            symbol_perms: vec![(0..params.q()).collect(); params.n()],
        }
    }

    pub fn coordinate_permutation(params: &GraphParams, coord_perm: Vec<usize>) -> Result<Self> {
        Self::new(params, coord_perm, vec![(0..params.q()).collect(); params.n()])
    }

    pub fn random<R: Rng + ?Sized>(params: &GraphParams, rng: &mut R) -> Self {
        let mut coord_perm: Vec<usize> = (0..params.n()).collect();
        coord_perm.shuffle(rng);
        let symbol_perms = (0..params.n())
            .map(|_| {
                let mut p: Vec<usize> = (0..params.q()).collect();
                p.shuffle(rng);
                p
            })
            .collect();
        Automorphism { coord_perm, symbol_perms }
    }

    pub fn coord_perm(&self) -> &[usize] {
        &self.coord_perm
    }

    pub fn symbol_perms(&self) -> &[Vec<usize>] {
        &self.symbol_perms
    }

    fn check_fits(&self, params: &GraphParams) -> Result<()> {
        if self.coord_perm.len() != params.n() || self.symbol_perms.iter().any(|p| p.len() != params.q()) {
            return Err(Error::MalformedAutomorphism(format!(
                "automorphism does not act on H({}, {})",
                params.n(),
                params.q()
            )));
        }
        Ok(())
    }

    pub fn apply(&self, params: &GraphParams, v: usize) -> Result<usize> {
        self.check_fits(params)?;
        params.check_vertex(v)?;
        Ok(self.apply_unchecked(params, v))
    }

    #[inline]
    pub(crate) fn apply_unchecked(&self, params: &GraphParams, v: usize) -> usize {
        let mut out = 0;
        for k in 0..params.n() {
            let t = self.coord_perm[k];
            out += self.symbol_perms[t][params.digit(v, k)] * params.stride(t);
        }
        out
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        let n = self.coord_perm.len();
        let coord_perm: Vec<usize> = (0..n).map(|k| self.coord_perm[other.coord_perm[k]]).collect();
        let mut symbol_perms = vec![Vec::new(); n];
        for k in 0..n {
            let mid = other.coord_perm[k];
            let t = self.coord_perm[mid];
            symbol_perms[t] = other.symbol_perms[mid]
                .iter()
                .map(|&a| self.symbol_perms[t][a])
                .collect();
        }
        Automorphism { coord_perm, symbol_perms }
    }

    pub fn inverse(&self) -> Automorphism {
        let n = self.coord_perm.len();
        let coord_perm = invert(&self.coord_perm);
        let mut symbol_perms = vec![Vec::new(); n];
        // source coordinate k of the inverse is target coordinate k of self
        for (k, &t) in coord_perm.iter().enumerate() {
            symbol_perms[t] = invert(&self.symbol_perms[k]);
        }
        Automorphism { coord_perm, symbol_perms }
    }

    /// The vertex permutation induced on all of H(n,q).
    pub fn vertex_map(&self, params: &GraphParams) -> Result<Vec<usize>> {
        self.check_fits(params)?;
        Ok((0..params.vertex_count()).map(|v| self.apply_unchecked(params, v)).collect())
    }
}
