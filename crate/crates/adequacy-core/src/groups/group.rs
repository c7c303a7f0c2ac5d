//! Finite group enumeration and structure.
//!
//! A `FiniteGroup` is built by breadth-first closure of a generating set of
//! concrete elements. The enumeration order is deterministic: element 0 is
//! the identity, and products s·g are visited in (g, s) order, so every run
//! agrees on element indices. All structural queries (element orders, cosets,
//! normal closures, O_p / O_{p'}, quotients, Sylow subgroups, p-complements,
//! abelianizations) work on those indices.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::element::GroupElement;
use crate::error::{Error, Result};
use crate::par;

/// Default ceiling on the number of elements a group enumeration may hold.
pub const DEFAULT_GROUP_CAP: u64 = 2_000_000;

/// Outcome of a p-complement search that ran to completion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplementOutcome {
    /// Sorted element indices of a subgroup whose order is the p'-part of |G|.
    Found(Vec<u32>),
    /// The exhaustive search finished without finding one, so none exists.
    ProvenAbsent,
}

/// A finite group with a fixed, deterministic element numbering.
pub struct FiniteGroup {
    generators: Vec<GroupElement>,
    elements: Vec<GroupElement>,
    index: HashMap<Box<[u8]>, u32>,
    /// parent[i], gen_of[i]: elements[i] = generators[gen_of[i]] * elements[parent[i]]
    /// along the BFS tree (both 0 for the identity).
    parent: Vec<u32>,
    gen_of: Vec<u32>,
    /// gen_table[s][g] = index of generators[s] * elements[g], for every pair.
    gen_table: Vec<Vec<u32>>,
    order_factorization: Vec<(u64, u32)>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteGroup {{ order: {}, generators: {} }}",
            self.elements.len(),
            self.generators.len()
        )
    }
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl FiniteGroup {
    /// Enumerate the group generated by `generators`, failing once the element
    /// count would exceed `cap`.
    pub fn enumerate(generators: Vec<GroupElement>, cap: u64) -> Result<FiniteGroup> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("a group needs at least one generator".into()));
        }
        if cap == 0 {
            return Err(Error::InvalidInput("group order cap must be positive".into()));
        }
        let cap = cap.min(u32::MAX as u64 - 1);
        for g in &generators[1..] {
            if !generators[0].compatible_with(g) {
                return Err(Error::Incompatible(
                    "generators must all have the same shape".into(),
                ));
            }
        }
        // Also validates invertibility of matrix generators up front.
        for g in &generators {
            g.inverse()?;
        }

        let identity = generators[0].identity_like();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Box<[u8]>, u32> = HashMap::new();
        index.insert(identity.canonical_bytes().into_boxed_slice(), 0);
        let mut parent = vec![0u32];
        let mut gen_of = vec![0u32];
        let mut gen_table: Vec<Vec<u32>> = vec![Vec::new(); generators.len()];

        let mut at = 0usize;
        while at < elements.len() {
            for (s, gen) in generators.iter().enumerate() {
                let prod = gen.mul(&elements[at])?;
                let bytes = prod.canonical_bytes();
                let next = match index.get(bytes.as_slice()) {
                    Some(&i) => i,
                    None => {
                        if elements.len() as u64 >= cap {
                            return Err(Error::CapExceeded { cap });
                        }
                        let i = elements.len() as u32;
                        index.insert(bytes.into_boxed_slice(), i);
                        elements.push(prod);
                        parent.push(at as u32);
                        gen_of.push(s as u32);
                        i
                    }
                };
                gen_table[s].push(next);
            }
            at += 1;
        }

        let order = elements.len() as u64;
        Ok(FiniteGroup {
            generators,
            elements,
            index,
            parent,
            gen_of,
            gen_table,
            order_factorization: factorize(order),
        })
    }

    /// Rebuild a group from previously enumerated parts (the cache loader).
    /// The index is reconstructed and the tree arrays are shape-checked; the
    /// caller is responsible for stream integrity (checksummed on disk).
    pub(crate) fn from_parts(
        generators: Vec<GroupElement>,
        elements: Vec<GroupElement>,
        parent: Vec<u32>,
        gen_of: Vec<u32>,
        gen_table: Vec<Vec<u32>>,
    ) -> Result<FiniteGroup> {
        let n = elements.len();
        if n == 0 || generators.is_empty() {
            return Err(Error::CacheFormat("empty group parts".into()));
        }
        if parent.len() != n || gen_of.len() != n || gen_table.len() != generators.len() {
            return Err(Error::CacheFormat("inconsistent table sizes".into()));
        }
        if gen_table.iter().any(|row| row.len() != n) {
            return Err(Error::CacheFormat("inconsistent generator table width".into()));
        }
        if !elements[0].is_identity() {
            return Err(Error::CacheFormat("element 0 is not the identity".into()));
        }
        let mut index: HashMap<Box<[u8]>, u32> = HashMap::with_capacity(n);
        for (i, el) in elements.iter().enumerate() {
            if index
                .insert(el.canonical_bytes().into_boxed_slice(), i as u32)
                .is_some()
            {
                return Err(Error::CacheFormat("duplicate element in stream".into()));
            }
        }
        for (s, gen) in generators.iter().enumerate() {
            let claimed = gen_table[s][0] as usize;
            if claimed >= n || elements[claimed] != *gen {
                return Err(Error::CacheFormat("generator row does not match".into()));
            }
        }
        let order = n as u64;
        Ok(FiniteGroup {
            generators,
            elements,
            index,
            parent,
            gen_of,
            gen_table,
            order_factorization: factorize(order),
        })
    }

    // ------------------------------------------------------------ accessors

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn order_factorization(&self) -> &[(u64, u32)] {
        &self.order_factorization
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Element index of generator s.
    pub fn generator_index(&self, s: usize) -> u32 {
        self.gen_table[s][0]
    }

    pub fn element(&self, i: u32) -> &GroupElement {
        &self.elements[i as usize]
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn index_of(&self, el: &GroupElement) -> Option<u32> {
        if !self.elements[0].compatible_with(el) {
            return None;
        }
        self.index.get(el.canonical_bytes().as_slice()).copied()
    }

    pub fn contains_element(&self, el: &GroupElement) -> bool {
        self.index_of(el).is_some()
    }

    pub(crate) fn bfs_parent(&self) -> &[u32] {
        &self.parent
    }

    pub(crate) fn bfs_gen(&self) -> &[u32] {
        &self.gen_of
    }

    pub(crate) fn gen_table(&self) -> &[Vec<u32>] {
        &self.gen_table
    }

    // ------------------------------------------------------- index products

    /// Index of elements[a] * elements[b], via a's generator word.
    pub fn mul_indices(&self, a: u32, b: u32) -> u32 {
        debug_assert!((a as usize) < self.elements.len());
        debug_assert!((b as usize) < self.elements.len());
        let mut word = Vec::new();
        let mut cur = a;
        while cur != 0 {
            word.push(self.gen_of[cur as usize]);
            cur = self.parent[cur as usize];
        }
        let mut out = b;
        for &s in word.iter().rev() {
            out = self.gen_table[s as usize][out as usize];
        }
        out
    }

    pub fn inverse_index(&self, a: u32) -> u32 {
        let inv = self.elements[a as usize]
            .inverse()
            .expect("enumerated group elements are invertible");
        *self
            .index
            .get(inv.canonical_bytes().as_slice())
            .expect("a group is closed under inversion")
    }

    /// Index of s * x * s^{-1}.
    pub fn conjugate_index(&self, s: u32, x: u32) -> u32 {
        self.mul_indices(self.mul_indices(s, x), self.inverse_index(s))
    }

    // ---------------------------------------------------------- order data

    pub fn element_order(&self, i: u32) -> u64 {
        let el = &self.elements[i as usize];
        let mut o = self.order();
        for &(p, _) in &self.order_factorization {
            while o % p == 0 {
                let cand = o / p;
                let powered = el.pow(cand).expect("closed group elements multiply");
                if powered.is_identity() {
                    o = cand;
                } else {
                    break;
                }
            }
        }
        o
    }

    /// Map order -> count over the given element indices.
    pub fn order_profile(&self, indices: &[u32]) -> BTreeMap<u64, u64> {
        let mut out = BTreeMap::new();
        for &i in indices {
            *out.entry(self.element_order(i)).or_insert(0) += 1;
        }
        out
    }

    pub fn full_order_profile(&self) -> BTreeMap<u64, u64> {
        let all: Vec<u32> = (0..self.elements.len() as u32).collect();
        self.order_profile(&all)
    }

    /// flags[i] is true when p does not divide the order of element i,
    /// computed by raising each element to the p'-part of |G|.
    pub fn p_regular_flags(&self, p: u64, threads: usize) -> Vec<bool> {
        assert!(p >= 2, "p must be at least 2");
        let mut m = self.order();
        while m % p == 0 {
            m /= p;
        }
        let chunks = par::run_partitioned(self.elements.len(), threads, |range| {
            range
                .map(|i| {
                    self.elements[i]
                        .pow(m)
                        .expect("closed group elements multiply")
                        .is_identity()
                })
                .collect::<Vec<bool>>()
        });
        let mut out = Vec::with_capacity(self.elements.len());
        for c in chunks {
            out.extend(c);
        }
        out
    }

    pub fn count_p_regular(&self, p: u64, threads: usize) -> u64 {
        self.p_regular_flags(p, threads)
            .into_iter()
            .filter(|&b| b)
            .count() as u64
    }

    // ----------------------------------------------------------- subgroups

    /// Closure of the given element indices as a subgroup; sorted ascending.
    pub fn subgroup_indices(&self, gens: &[u32]) -> Vec<u32> {
        let n = self.elements.len();
        let mut member = vec![false; n];
        member[0] = true;
        let mut list = vec![0u32];
        let mut at = 0usize;
        while at < list.len() {
            let x = list[at];
            at += 1;
            for &s in gens {
                let y = self.mul_indices(s, x);
                if !member[y as usize] {
                    member[y as usize] = true;
                    list.push(y);
                }
            }
        }
        list.sort_unstable();
        list
    }

    /// Greedy small generating set for an already-closed subgroup, obtained
    /// by repeatedly adjoining the least member outside the running closure.
    /// The subgroup must be sorted, contain the identity, and be closed.
    pub fn small_generating_set(&self, subgroup: &[u32]) -> Vec<u32> {
        let mut gens: Vec<u32> = Vec::new();
        let mut closure = vec![0u32];
        while closure.len() < subgroup.len() {
            let next = subgroup
                .iter()
                .copied()
                .find(|i| closure.binary_search(i).is_err())
                .expect("closure grew beyond the subgroup");
            gens.push(next);
            closure = self.subgroup_indices(&gens);
        }
        gens
    }

    /// Same, but starting from elements; fails when one lies outside the group.
    pub fn subgroup_from_elements(&self, gens: &[GroupElement]) -> Result<Vec<u32>> {
        let mut idx = Vec::with_capacity(gens.len());
        for g in gens {
            idx.push(self.index_of(g).ok_or(Error::NotSubgroup)?);
        }
        Ok(self.subgroup_indices(&idx))
    }

    /// Left cosets g·H in ascending-representative order; each coset sorted,
    /// so coset[0] is the least member and serves as the representative.
    pub fn left_cosets(&self, subgroup: &[u32]) -> Vec<Vec<u32>> {
        let n = self.elements.len();
        let mut covered = vec![false; n];
        let mut cosets = Vec::with_capacity(n / subgroup.len().max(1));
        for g in 0..n as u32 {
            if covered[g as usize] {
                continue;
            }
            let mut coset: Vec<u32> = subgroup.iter().map(|&h| self.mul_indices(g, h)).collect();
            coset.sort_unstable();
            for &x in &coset {
                covered[x as usize] = true;
            }
            cosets.push(coset);
        }
        cosets
    }

    /// Is the given sorted index set closed under conjugation by the group?
    pub fn is_normal(&self, sub: &[u32]) -> bool {
        let n = self.elements.len();
        let mut member = vec![false; n];
        for &x in sub {
            member[x as usize] = true;
        }
        for s in 0..self.generators.len() {
            let si = self.generator_index(s);
            let sinv = self.inverse_index(si);
            for &x in sub {
                let c = self.mul_indices(self.mul_indices(si, x), sinv);
                if !member[c as usize] {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest normal subgroup containing the seed elements. The subgroup is
    /// grown in doubling phases: close under products, then look for a single
    /// missing conjugate and adjoin it, until conjugation-stable.
    pub fn normal_closure(&self, seed: &[u32]) -> Vec<u32> {
        let n = self.elements.len();
        let gen_idx: Vec<u32> = (0..self.generators.len())
            .map(|s| self.generator_index(s))
            .collect();
        let gen_inv: Vec<u32> = gen_idx.iter().map(|&i| self.inverse_index(i)).collect();
        let mut hgens: Vec<u32> = seed.to_vec();
        hgens.dedup();
        loop {
            let members = self.subgroup_indices(&hgens);
            if members.len() == n {
                return members;
            }
            let mut flags = vec![false; n];
            for &x in &members {
                flags[x as usize] = true;
            }
            let mut missing = None;
            'scan: for &x in &members {
                for (&s, &si) in gen_idx.iter().zip(&gen_inv) {
                    let c = self.mul_indices(self.mul_indices(s, x), si);
                    if !flags[c as usize] {
                        missing = Some(c);
                        break 'scan;
                    }
                }
            }
            match missing {
                Some(c) => hgens.push(c),
                None => return members,
            }
        }
    }

    /// Largest subgroup of `sub` that is normal in the whole group, computed
    /// by deleting elements whose conjugates escape `sub` until stable. The
    /// survivors are exactly the intersection of all conjugates of `sub`.
    pub fn subgroup_core(&self, sub: &[u32]) -> Vec<u32> {
        let n = self.elements.len();
        let mut member = vec![false; n];
        for &x in sub {
            member[x as usize] = true;
        }
        let gen_idx: Vec<u32> = (0..self.generators.len())
            .map(|s| self.generator_index(s))
            .collect();
        let gen_inv: Vec<u32> = gen_idx.iter().map(|&i| self.inverse_index(i)).collect();
        loop {
            let mut changed = false;
            for &x in sub {
                if !member[x as usize] {
                    continue;
                }
                for (&s, &si) in gen_idx.iter().zip(&gen_inv) {
                    let c = self.mul_indices(self.mul_indices(s, x), si);
                    if !member[c as usize] {
                        member[x as usize] = false;
                        changed = true;
                        break;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        (0..n as u32).filter(|&i| member[i as usize]).collect()
    }

    pub fn is_core_free(&self, sub: &[u32]) -> bool {
        self.subgroup_core(sub) == [0]
    }

    // --------------------------------------------------- characteristic subs

    fn largest_normal_filtered(
        &self,
        candidates: &[bool],
        max_size: u64,
        keep: impl Fn(u64) -> bool,
    ) -> Vec<u32> {
        let n = self.elements.len();
        let mut member = vec![false; n];
        member[0] = true;
        let mut current = vec![0u32];
        let mut gens: Vec<u32> = Vec::new();
        for g in 1..n {
            if current.len() as u64 >= max_size {
                break;
            }
            if member[g] || !candidates[g] {
                continue;
            }
            let mut cand = gens.clone();
            cand.push(g as u32);
            let closure = self.normal_closure(&cand);
            if keep(closure.len() as u64) {
                for &x in &closure {
                    member[x as usize] = true;
                }
                gens = cand;
                current = closure;
            }
        }
        current
    }

    /// Largest normal subgroup of order coprime to p (sorted indices).
    pub fn o_p_prime(&self, p: u64) -> Vec<u32> {
        let flags = self.p_regular_flags(p, 1);
        let mut m = self.order();
        while m % p == 0 {
            m /= p;
        }
        self.largest_normal_filtered(&flags, m, |size| size % p != 0)
    }

    /// Largest normal p-subgroup (sorted indices).
    pub fn o_p(&self, p: u64) -> Vec<u32> {
        let mut pa = 1u64;
        let mut m = self.order();
        while m % p == 0 {
            pa *= p;
            m /= p;
        }
        let flags: Vec<bool> = self
            .elements
            .iter()
            .map(|e| {
                e.pow(pa)
                    .expect("closed group elements multiply")
                    .is_identity()
            })
            .collect();
        self.largest_normal_filtered(&flags, pa, |size| {
            let mut t = size;
            while t % p == 0 {
                t /= p;
            }
            t == 1
        })
    }

    /// Is the group generated by its elements of order coprime to p?
    pub fn is_generated_by_p_regular(&self, p: u64, threads: usize) -> bool {
        let n = self.elements.len();
        let flags = self.p_regular_flags(p, threads);
        let mut member = vec![false; n];
        member[0] = true;
        let mut count = 1usize;
        let mut gens: Vec<u32> = Vec::new();
        loop {
            let mut next = None;
            for i in 1..n {
                if flags[i] && !member[i] {
                    next = Some(i as u32);
                    break;
                }
            }
            match next {
                None => return count == n,
                Some(x) => {
                    gens.push(x);
                    let closure = self.normal_closure(&gens);
                    count = closure.len();
                    if count == n {
                        return true;
                    }
                    member = vec![false; n];
                    for &y in &closure {
                        member[y as usize] = true;
                    }
                }
            }
        }
    }

    /// A Sylow p-subgroup (sorted indices): start from a p-element of maximal
    /// order and repeatedly adjoin the least-index p-element that normalizes
    /// the current p-subgroup, which always exists below full Sylow order.
    pub fn sylow_subgroup(&self, p: u64) -> Vec<u32> {
        let mut pa = 1u64;
        let mut m = self.order();
        while m % p == 0 {
            pa *= p;
            m /= p;
        }
        if pa == 1 {
            return vec![0];
        }
        let n = self.elements.len();
        let flags: Vec<bool> = self
            .elements
            .iter()
            .map(|e| {
                e.pow(pa)
                    .expect("closed group elements multiply")
                    .is_identity()
            })
            .collect();
        let mut best = (1u64, 0u32);
        for i in 1..n {
            if flags[i] {
                let o = self.element_order(i as u32);
                if o > best.0 {
                    best = (o, i as u32);
                }
            }
        }
        let mut gens = vec![best.1];
        let mut sub = self.subgroup_indices(&gens);
        while (sub.len() as u64) < pa {
            let mut member = vec![false; n];
            for &x in &sub {
                member[x as usize] = true;
            }
            let mut found = None;
            'outer: for i in 1..n as u32 {
                if !flags[i as usize] || member[i as usize] {
                    continue;
                }
                let ii = self.inverse_index(i);
                for &g in &gens {
                    let c = self.mul_indices(self.mul_indices(i, g), ii);
                    if !member[c as usize] {
                        continue 'outer;
                    }
                }
                found = Some(i);
                break;
            }
            let x = found.expect("a p-subgroup below Sylow order always extends");
            gens.push(x);
            sub = self.subgroup_indices(&gens);
        }
        sub
    }

    /// Search for a subgroup whose order is the p'-part of |G|: a randomized
    /// growth phase for speed, then an exhaustive ascending-index search whose
    /// exhaustion proves absence. Fails with a resource error only when the
    /// exhaustive search exceeds its node budget.
    pub fn find_p_complement(&self, p: u64, seed: u64) -> Result<ComplementOutcome> {
        let n = self.elements.len();
        let order = self.order();
        let mut m = order;
        while m % p == 0 {
            m /= p;
        }
        if m == order {
            return Ok(ComplementOutcome::Found((0..n as u32).collect()));
        }
        if m == 1 {
            return Ok(ComplementOutcome::Found(vec![0]));
        }
        let flags = self.p_regular_flags(p, 1);
        let pregs: Vec<u32> = (1..n as u32).filter(|&i| flags[i as usize]).collect();

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..40 {
            let mut gens: Vec<u32> = Vec::new();
            let mut sub = vec![0u32];
            let mut stall = 0;
            while (sub.len() as u64) < m && stall < 8 {
                let x = pregs[rng.random_range(0..pregs.len())];
                if sub.binary_search(&x).is_ok() {
                    stall += 1;
                    continue;
                }
                let mut cand = gens.clone();
                cand.push(x);
                let closure = self.subgroup_indices(&cand);
                if closure.len() as u64 % p != 0 {
                    gens = cand;
                    sub = closure;
                    stall = 0;
                } else {
                    stall += 1;
                }
            }
            if sub.len() as u64 == m {
                return Ok(ComplementOutcome::Found(sub));
            }
        }

        let mut budget = 200_000u64;
        let mut gens: Vec<u32> = Vec::new();
        match self.complement_dfs(&pregs, &mut gens, &vec![0u32], 0, m, p, &mut budget)? {
            Some(sub) => Ok(ComplementOutcome::Found(sub)),
            None => Ok(ComplementOutcome::ProvenAbsent),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn complement_dfs(
        &self,
        pregs: &[u32],
        gens: &mut Vec<u32>,
        sub: &Vec<u32>,
        start: usize,
        m: u64,
        p: u64,
        budget: &mut u64,
    ) -> Result<Option<Vec<u32>>> {
        if sub.len() as u64 == m {
            return Ok(Some(sub.clone()));
        }
        for k in start..pregs.len() {
            let x = pregs[k];
            if sub.binary_search(&x).is_ok() {
                continue;
            }
            if *budget == 0 {
                return Err(Error::BudgetExceeded(
                    "p-complement search exceeded its node budget".into(),
                ));
            }
            *budget -= 1;
            gens.push(x);
            let closure = self.subgroup_indices(gens);
            if closure.len() as u64 % p != 0 {
                if let Some(hit) = self.complement_dfs(pregs, gens, &closure, k + 1, m, p, budget)? {
                    return Ok(Some(hit));
                }
            }
            gens.pop();
        }
        Ok(None)
    }

    // ------------------------------------------------------------ quotients

    /// Quotient by a normal subgroup given as sorted element indices. The
    /// quotient's elements are cosets keyed by their least-index member.
    pub fn quotient_group(parent: &Arc<FiniteGroup>, normal: &[u32]) -> Result<FiniteGroup> {
        let n = parent.elements.len();
        let mut member = vec![false; n];
        for &x in normal {
            if x as usize >= n {
                return Err(Error::InvalidInput("normal subgroup index out of range".into()));
            }
            member[x as usize] = true;
        }
        if !member[0] {
            return Err(Error::NotSubgroup);
        }
        // Closure check via a greedy generating subset.
        let mut hgens: Vec<u32> = Vec::new();
        let mut h = vec![0u32];
        for &x in normal {
            if h.binary_search(&x).is_ok() {
                continue;
            }
            hgens.push(x);
            h = parent.subgroup_indices(&hgens);
            if h.iter().any(|&y| !member[y as usize]) {
                return Err(Error::NotSubgroup);
            }
        }
        if h.len() != normal.len() {
            return Err(Error::NotSubgroup);
        }
        // Normality: generator conjugates of the subgroup generators suffice.
        for s in 0..parent.generators.len() {
            let si = parent.generator_index(s);
            let sinv = parent.inverse_index(si);
            for &x in &hgens {
                let c = parent.mul_indices(parent.mul_indices(si, x), sinv);
                if !member[c as usize] {
                    return Err(Error::NotNormal {
                        what: "quotient construction".into(),
                    });
                }
            }
        }

        let mut rep_of = vec![0u32; n];
        for coset in parent.left_cosets(normal) {
            let rep = coset[0];
            for &x in &coset {
                rep_of[x as usize] = rep;
            }
        }
        static NEXT_CTX_ID: AtomicU64 = AtomicU64::new(1);
        let ctx = Arc::new(QuotientCtx {
            id: NEXT_CTX_ID.fetch_add(1, Ordering::Relaxed),
            parent: parent.clone(),
            normal_indices: normal.to_vec(),
            rep_of,
        });
        let qgens: Vec<GroupElement> = (0..parent.generators.len())
            .map(|s| {
                let gi = parent.generator_index(s) as usize;
                GroupElement::quotient(ctx.clone(), ctx.rep_of[gi])
            })
            .collect();
        FiniteGroup::enumerate(qgens, parent.order())
    }

    /// Whether every composition factor is a p-group or a p'-group, decided by
    /// alternately factoring out O_{p'} and O_p; a stall on a nontrivial group
    /// means some factor mixes p with other primes.
    pub fn is_p_solvable(group: &Arc<FiniteGroup>, p: u64) -> Result<bool> {
        let mut current = group.clone();
        loop {
            if current.order() == 1 {
                return Ok(true);
            }
            let np = current.o_p_prime(p);
            if np.len() > 1 {
                current = Arc::new(FiniteGroup::quotient_group(&current, &np)?);
                continue;
            }
            let npp = current.o_p(p);
            if npp.len() > 1 {
                current = Arc::new(FiniteGroup::quotient_group(&current, &npp)?);
                continue;
            }
            return Ok(false);
        }
    }

    /// Invariant factors of the abelianization, ascending (each divides the
    /// next). Computed by factoring out the derived subgroup, then greedily
    /// splitting off a cyclic factor of maximal order.
    pub fn abelianization_invariants(group: &Arc<FiniteGroup>) -> Result<Vec<u64>> {
        let k = group.generators.len();
        let mut comms = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                let a = group.generator_index(i);
                let b = group.generator_index(j);
                let ab = group.mul_indices(a, b);
                let ba = group.mul_indices(b, a);
                let comm = group.mul_indices(ab, group.inverse_index(ba));
                if comm != 0 {
                    comms.push(comm);
                }
            }
        }
        let derived = group.normal_closure(&comms);
        let q = Arc::new(FiniteGroup::quotient_group(group, &derived)?);
        let mut invariants = abelian_invariants_rec(&q)?;
        invariants.sort_unstable();
        Ok(invariants)
    }
}

fn abelian_invariants_rec(q: &Arc<FiniteGroup>) -> Result<Vec<u64>> {
    if q.order() == 1 {
        return Ok(Vec::new());
    }
    let mut best = (0u64, 0u32);
    for i in 0..q.order() as u32 {
        let o = q.element_order(i);
        if o > best.0 {
            best = (o, i);
        }
    }
    let cyclic = q.subgroup_indices(&[best.1]);
    let next = Arc::new(FiniteGroup::quotient_group(q, &cyclic)?);
    let mut rest = abelian_invariants_rec(&next)?;
    rest.push(best.0);
    Ok(rest)
}

/// Shared context for the elements of one quotient group: the parent group,
/// the normal subgroup, and the least-index representative of every coset.
pub struct QuotientCtx {
    id: u64,
    parent: Arc<FiniteGroup>,
    normal_indices: Vec<u32>,
    rep_of: Vec<u32>,
}

impl PartialEq for QuotientCtx {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for QuotientCtx {}

impl fmt::Debug for QuotientCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "QuotientCtx {{ id: {}, parent_order: {}, normal_order: {} }}",
            self.id,
            self.parent.order(),
            self.normal_indices.len()
        )
    }
}

impl QuotientCtx {
    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn normal_indices(&self) -> &[u32] {
        &self.normal_indices
    }

    pub(crate) fn parent_product(&self, a: u32, b: u32) -> Result<u32> {
        let n = self.parent.order() as u32;
        if a >= n || b >= n {
            return Err(Error::InvalidInput("coset representative out of range".into()));
        }
        Ok(self.parent.mul_indices(a, b))
    }

    pub(crate) fn parent_inverse(&self, a: u32) -> Result<u32> {
        if a >= self.parent.order() as u32 {
            return Err(Error::InvalidInput("coset representative out of range".into()));
        }
        Ok(self.parent.inverse_index(a))
    }

    pub(crate) fn canonical_rep(&self, idx: u32) -> Result<u32> {
        self.rep_of
            .get(idx as usize)
            .copied()
            .ok_or_else(|| Error::InvalidInput("coset representative out of range".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::linalg::Matrix;

    fn perm(map: &[u32]) -> GroupElement {
        GroupElement::permutation(map.to_vec()).unwrap()
    }

    fn mat(field: &Field, rows: &[&[i64]]) -> GroupElement {
        GroupElement::matrix(Matrix::from_i64(field, rows).unwrap()).unwrap()
    }

    fn sl2_3() -> FiniteGroup {
        let f3 = Field::new(3, 1).unwrap();
        let s = mat(&f3, &[&[0, -1], &[1, 0]]);
        let t = mat(&f3, &[&[1, 1], &[0, 1]]);
        FiniteGroup::enumerate(vec![s, t], 100).unwrap()
    }

    fn s4() -> FiniteGroup {
        FiniteGroup::enumerate(vec![perm(&[1, 0, 2, 3]), perm(&[1, 2, 3, 0])], 100).unwrap()
    }

    fn a5() -> FiniteGroup {
        FiniteGroup::enumerate(vec![perm(&[1, 2, 0, 3, 4]), perm(&[1, 2, 3, 4, 0])], 100).unwrap()
    }

    fn s3() -> FiniteGroup {
        FiniteGroup::enumerate(vec![perm(&[1, 0, 2]), perm(&[1, 2, 0])], 100).unwrap()
    }

    #[test]
    fn cyclic_group_enumerates_in_power_order() {
        let g = FiniteGroup::enumerate(vec![perm(&[1, 2, 3, 4, 0])], 10).unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.order_factorization(), &[(5, 1)]);
        // BFS from the identity with one generator lists successive powers.
        let gen = g.element(1).clone();
        let mut power = gen.identity_like();
        for i in 0..5 {
            assert_eq!(g.element(i), &power);
            power = gen.mul(&power).unwrap();
        }
        assert_eq!(g.element_order(1), 5);
        assert_eq!(g.element_order(0), 1);
    }

    #[test]
    fn s3_structure_and_index_arithmetic() {
        let g = s3();
        assert_eq!(g.order(), 6);
        let profile = g.full_order_profile();
        assert_eq!(profile.get(&1), Some(&1));
        assert_eq!(profile.get(&2), Some(&3));
        assert_eq!(profile.get(&3), Some(&2));
        // Index products agree with element products, exhaustively.
        for a in 0..6u32 {
            for b in 0..6u32 {
                let via_indices = g.element(g.mul_indices(a, b)).clone();
                let direct = g.element(a).mul(g.element(b)).unwrap();
                assert_eq!(via_indices, direct);
            }
            let inv = g.inverse_index(a);
            assert!(g
                .element(a)
                .mul(g.element(inv))
                .unwrap()
                .is_identity());
        }
        assert_eq!(g.count_p_regular(3, 1), 4);
        assert_eq!(g.count_p_regular(2, 1), 3);
    }

    #[test]
    fn sl2_3_order_profile_and_regular_count() {
        let g = sl2_3();
        assert_eq!(g.order(), 24);
        let profile = g.full_order_profile();
        let expected: BTreeMap<u64, u64> =
            [(1, 1), (2, 1), (3, 8), (4, 6), (6, 8)].into_iter().collect();
        assert_eq!(profile, expected);
        assert_eq!(g.count_p_regular(3, 1), 8);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let err = FiniteGroup::enumerate(vec![perm(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 0])], 5)
            .unwrap_err();
        assert!(err.is_resource_limit());
        assert!(matches!(err, Error::CapExceeded { cap: 5 }));
    }

    #[test]
    fn cosets_partition_the_group() {
        let g = s4();
        // Stabilizer of the point 3: a copy of the symmetric group on {0,1,2}.
        let stab = g
            .subgroup_from_elements(&[perm(&[1, 0, 2, 3]), perm(&[1, 2, 0, 3])])
            .unwrap();
        assert_eq!(stab.len(), 6);
        let cosets = g.left_cosets(&stab);
        assert_eq!(cosets.len(), 4);
        let mut seen = vec![false; 24];
        let mut last_rep = None;
        for coset in &cosets {
            assert_eq!(coset.len(), 6);
            for &x in coset {
                assert!(!seen[x as usize]);
                seen[x as usize] = true;
            }
            // Representatives (least members) appear in ascending order.
            if let Some(prev) = last_rep {
                assert!(coset[0] > prev);
            }
            last_rep = Some(coset[0]);
        }
        assert!(seen.into_iter().all(|b| b));
        // The stabilizer is not normal, and its core is trivial.
        assert!(!g.is_normal(&stab));
        assert!(g.is_core_free(&stab));
    }

    #[test]
    fn normal_closures() {
        let g = s3();
        let transposition = g.index_of(&perm(&[1, 0, 2])).unwrap();
        let three_cycle = g.index_of(&perm(&[1, 2, 0])).unwrap();
        assert_eq!(g.normal_closure(&[transposition]).len(), 6);
        let a3 = g.normal_closure(&[three_cycle]);
        assert_eq!(a3.len(), 3);
        assert!(g.is_normal(&a3));
        assert_eq!(g.subgroup_core(&a3), a3);

        // In a simple group every nontrivial normal closure is everything.
        let a = a5();
        let double = a.index_of(&perm(&[1, 0, 3, 2, 4])).unwrap();
        assert_eq!(a.normal_closure(&[double]).len(), 60);
    }

    #[test]
    fn largest_normal_p_and_p_prime_subgroups() {
        let g = s3();
        assert_eq!(g.o_p_prime(3), vec![0]);
        assert_eq!(g.o_p(3).len(), 3);
        assert_eq!(g.o_p_prime(2).len(), 3);
        assert_eq!(g.o_p(2), vec![0]);

        let h = sl2_3();
        assert_eq!(h.o_p_prime(3).len(), 8);
        assert_eq!(h.o_p(2).len(), 8);
        assert_eq!(h.o_p(3), vec![0]);
    }

    #[test]
    fn quotients_and_their_arithmetic() {
        let g = Arc::new(s3());
        let three_cycle = g.index_of(&perm(&[1, 2, 0])).unwrap();
        let a3 = g.normal_closure(&[three_cycle]);
        let q = FiniteGroup::quotient_group(&g, &a3).unwrap();
        assert_eq!(q.order(), 2);
        let x = q.element(1).clone();
        assert!(x.mul(&x).unwrap().is_identity());
        assert_eq!(q.element_order(1), 2);

        // Quotient by a non-normal subgroup is rejected.
        let transposition = g.index_of(&perm(&[1, 0, 2])).unwrap();
        let c2 = g.subgroup_indices(&[transposition]);
        let err = FiniteGroup::quotient_group(&g, &c2).unwrap_err();
        assert!(matches!(err, Error::NotNormal { .. }));

        // Tower: S4 / V4 has order 6, and its own order-3 kernel leaves C2.
        let s4 = Arc::new(s4());
        let v4 = s4.normal_closure(&[s4.index_of(&perm(&[1, 0, 3, 2])).unwrap()]);
        assert_eq!(v4.len(), 4);
        let q6 = Arc::new(FiniteGroup::quotient_group(&s4, &v4).unwrap());
        assert_eq!(q6.order(), 6);
        let inner = q6.o_p(3);
        assert_eq!(inner.len(), 3);
        let q2 = FiniteGroup::quotient_group(&q6, &inner).unwrap();
        assert_eq!(q2.order(), 2);
    }

    #[test]
    fn p_solvability_verdicts() {
        let s3 = Arc::new(s3());
        assert!(FiniteGroup::is_p_solvable(&s3, 3).unwrap());
        assert!(FiniteGroup::is_p_solvable(&s3, 2).unwrap());
        assert!(FiniteGroup::is_p_solvable(&s3, 5).unwrap());

        let sl = Arc::new(sl2_3());
        assert!(FiniteGroup::is_p_solvable(&sl, 3).unwrap());

        let s5 = Arc::new(
            FiniteGroup::enumerate(vec![perm(&[1, 0, 2, 3, 4]), perm(&[1, 2, 3, 4, 0])], 200)
                .unwrap(),
        );
        assert_eq!(s5.order(), 120);
        assert!(!FiniteGroup::is_p_solvable(&s5, 2).unwrap());
        assert!(!FiniteGroup::is_p_solvable(&s5, 3).unwrap());
        assert!(!FiniteGroup::is_p_solvable(&s5, 5).unwrap());
    }

    #[test]
    fn sylow_subgroups() {
        let g = sl2_3();
        let syl2 = g.sylow_subgroup(2);
        assert_eq!(syl2.len(), 8);
        assert!(g.is_normal(&syl2));
        for &x in &syl2 {
            let o = g.element_order(x);
            assert!(o == 1 || o == 2 || o == 4 || o == 8);
        }
        let syl3 = g.sylow_subgroup(3);
        assert_eq!(syl3.len(), 3);

        let s = s4();
        assert_eq!(s.sylow_subgroup(2).len(), 8);
        assert_eq!(s.sylow_subgroup(3).len(), 3);
        assert_eq!(s.sylow_subgroup(5), vec![0]);
    }

    #[test]
    fn p_complement_search_outcomes() {
        let g = sl2_3();
        match g.find_p_complement(3, 7).unwrap() {
            ComplementOutcome::Found(sub) => {
                assert_eq!(sub.len(), 8);
                for &x in &sub {
                    assert!(g.element_order(x) % 3 != 0);
                }
            }
            ComplementOutcome::ProvenAbsent => panic!("an order-8 subgroup exists here"),
        }

        let s = s3();
        match s.find_p_complement(3, 7).unwrap() {
            ComplementOutcome::Found(sub) => assert_eq!(sub.len(), 2),
            ComplementOutcome::ProvenAbsent => panic!("an order-2 subgroup exists here"),
        }

        // The alternating group on five points has no subgroup of order 20.
        let a = a5();
        assert_eq!(a.find_p_complement(3, 7).unwrap(), ComplementOutcome::ProvenAbsent);
    }

    #[test]
    fn abelianization_invariants() {
        let s3 = Arc::new(s3());
        assert_eq!(FiniteGroup::abelianization_invariants(&s3).unwrap(), vec![2]);

        let sl = Arc::new(sl2_3());
        assert_eq!(FiniteGroup::abelianization_invariants(&sl).unwrap(), vec![3]);

        // Quaternion group of order 8 inside the 2x2 matrices over GF(3).
        let f3 = Field::new(3, 1).unwrap();
        let i = mat(&f3, &[&[0, -1], &[1, 0]]);
        let j = mat(&f3, &[&[1, 1], &[1, -1]]);
        let q8 = Arc::new(FiniteGroup::enumerate(vec![i, j], 20).unwrap());
        assert_eq!(q8.order(), 8);
        assert_eq!(
            FiniteGroup::abelianization_invariants(&q8).unwrap(),
            vec![2, 2]
        );

        let c6 = Arc::new(FiniteGroup::enumerate(vec![perm(&[1, 2, 3, 4, 5, 0])], 10).unwrap());
        assert_eq!(FiniteGroup::abelianization_invariants(&c6).unwrap(), vec![6]);

        let a4 = Arc::new(
            FiniteGroup::enumerate(vec![perm(&[1, 0, 3, 2]), perm(&[1, 2, 0, 3])], 20).unwrap(),
        );
        assert_eq!(a4.order(), 12);
        assert_eq!(FiniteGroup::abelianization_invariants(&a4).unwrap(), vec![3]);
    }

    #[test]
    fn generation_by_p_regular_elements() {
        let g = s3();
        // Elements of odd order only generate the rotation subgroup.
        assert!(!g.is_generated_by_p_regular(2, 1));
        assert!(g.is_generated_by_p_regular(3, 1));

        // Here the 3-regular elements form the (proper) Sylow 2-subgroup.
        let sl = sl2_3();
        assert!(!sl.is_generated_by_p_regular(3, 1));

        let a = a5();
        assert!(a.is_generated_by_p_regular(2, 1));
        assert!(a.is_generated_by_p_regular(3, 1));
        assert!(a.is_generated_by_p_regular(5, 1));
    }

    #[test]
    fn flags_match_element_orders_and_threads_agree() {
        let g = s4();
        let flags1 = g.p_regular_flags(2, 1);
        let flags4 = g.p_regular_flags(2, 4);
        assert_eq!(flags1, flags4);
        for i in 0..g.order() as u32 {
            assert_eq!(flags1[i as usize], g.element_order(i) % 2 != 0);
        }
    }

    #[test]
    fn mixed_generator_shapes_are_rejected() {
        let f3 = Field::new(3, 1).unwrap();
        let err = FiniteGroup::enumerate(
            vec![perm(&[1, 0, 2]), mat(&f3, &[&[1, 0], &[0, 1]])],
            10,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Incompatible(_)));
    }
}
