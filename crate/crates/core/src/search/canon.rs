//! Canonical forms of 2-partitions under Aut(H(n,q)): the smallest image of
//! the cell (read as a little-endian integer) over all coordinate and
//! per-coordinate symbol permutations.

use std::cmp::Ordering;

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::hamming::{Automorphism, GraphParams};
use crate::partition::TwoPartition;

/// Guard on both `n` and `q` for canonical forms.
pub const CANON_MAX: usize = 5;

const UNSET: usize = usize::MAX;

/// Branch and bound over automorphisms, deciding target vertices from the
/// highest index down. For target coordinate `t` we choose the source
/// coordinate `src[t]` and, lazily, the source symbol `pre[t][s]` of each
/// target symbol `s`.
struct Canon<'a> {
    params: &'a GraphParams,
    cell: &'a Bitset,
    src: Vec<usize>,
    src_used: Vec<bool>,
    pre: Vec<Vec<usize>>,
    pre_used: Vec<Vec<bool>>,
    best: Vec<bool>,
    best_choice: Option<(Vec<usize>, Vec<Vec<usize>>)>,
}

impl<'a> Canon<'a> {
    fn new(params: &'a GraphParams, cell: &'a Bitset) -> Self {
        let (n, q) = (params.n(), params.q());
        Canon {
            params,
            cell,
            src: vec![UNSET; n],
            src_used: vec![false; n],
            pre: vec![vec![UNSET; q]; n],
            pre_used: vec![vec![false; q]; n],
            best: Vec::with_capacity(params.vertex_count()),
            best_choice: None,
        }
    }

    /// `less`: the current path is already smaller than `best` (or no best exists).
    fn search(&mut self, pos: usize, mut less: bool) {
        let nv = self.params.vertex_count();
        if pos == nv {
            if less {
                self.best_choice = Some((self.src.clone(), self.pre.clone()));
            }
            return;
        }
        let y = nv - 1 - pos;
        for t in 0..self.params.n() {
            if self.src[t] == UNSET {
                for k in 0..self.params.n() {
                    if self.src_used[k] {
                        continue;
                    }
                    self.src[t] = k;
                    self.src_used[k] = true;
                    self.search(pos, less);
                    self.src_used[k] = false;
                    self.src[t] = UNSET;
                    less = false;
                }
                return;
            }
            let s = self.params.digit(y, t);
            if self.pre[t][s] == UNSET {
                for a in 0..self.params.q() {
                    if self.pre_used[t][a] {
                        continue;
                    }
                    self.pre[t][s] = a;
                    self.pre_used[t][a] = true;
                    self.search(pos, less);
                    self.pre_used[t][a] = false;
                    self.pre[t][s] = UNSET;
                    less = false;
                }
                return;
            }
        }
        let x: usize = (0..self.params.n())
            .map(|t| self.pre[t][self.params.digit(y, t)] * self.params.stride(self.src[t]))
            .sum();
        let bit = self.cell.contains(x);
        if !less {
            match bit.cmp(&self.best[pos]) {
                Ordering::Greater => return,
                Ordering::Equal => {
                    self.search(pos + 1, false);
                    return;
                }
                Ordering::Less => {}
            }
        }
        self.best.truncate(pos);
        self.best.push(bit);
        self.search(pos + 1, true);
    }

    fn automorphism(&self) -> Result<Automorphism> {
        let (src, pre) = self.best_choice.as_ref().expect("search visits at least one leaf");
        let (n, q) = (self.params.n(), self.params.q());
        let mut coord_perm = vec![0; n];
        let mut symbol_perms = vec![vec![0; q]; n];
        for t in 0..n {
            coord_perm[src[t]] = t;
            for s in 0..q {
                symbol_perms[t][pre[t][s]] = s;
            }
        }
        Automorphism::new(self.params, coord_perm, symbol_perms)
    }
}

fn check_guard(params: &GraphParams) -> Result<()> {
    if params.n() > CANON_MAX || params.q() > CANON_MAX {
        return Err(Error::GuardExceeded(format!(
            "canonical forms need n, q <= {CANON_MAX}, got H({},{})",
            params.n(),
            params.q()
        )));
    }
    Ok(())
}

/// The minimal image of the cell together with an automorphism `g` such that
/// `g·p` has that cell.
pub fn canonical_form_with_automorphism(p: &TwoPartition) -> Result<(Bitset, Automorphism)> {
    let params = p.params();
    check_guard(params)?;
    let mut canon = Canon::new(params, p.cell());
    canon.search(0, true);
    let nv = params.vertex_count();
    let mut cell = Bitset::new(nv);
    for (pos, &bit) in canon.best.iter().enumerate() {
        if bit {
            cell.insert(nv - 1 - pos);
        }
    }
    Ok((cell, canon.automorphism()?))
}

pub fn canonical_form(p: &TwoPartition) -> Result<Bitset> {
    Ok(canonical_form_with_automorphism(p)?.0)
}

/// The partition whose cell is [`canonical_form`] of `p`.
pub fn canonical_partition(p: &TwoPartition) -> Result<TwoPartition> {
    TwoPartition::new(p.params().clone(), canonical_form(p)?)
}

pub fn are_isomorphic(a: &TwoPartition, b: &TwoPartition) -> Result<bool> {
    if a.params() != b.params() {
        return Err(Error::ParamsMismatch(format!("{:?} vs {:?}", a.params(), b.params())));
    }
    if a.size() != b.size() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}
