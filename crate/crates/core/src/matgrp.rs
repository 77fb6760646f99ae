//! Stabilizer chains for matrix groups acting on `(Z/m)^n` by `v ↦ Mv`.
//!
//! Construction is randomized Schreier–Sims driven by a seeded product-replacement
//! generator, optionally followed by a deterministic sweep sifting every Schreier
//! generator. An unverified chain still certifies a lower bound on the group
//! order, since every orbit it records is an orbit of a genuine subgroup of the
//! point stabilizer.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symembed::{embed_permutation, transposition_matrix, Permutation};
use crate::symplectic::{group_order, MatMod, SympForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatGrpError {
    #[error("no generators given")]
    NoGenerators,
    #[error("modulus {0} unsupported (need 2..=256)")]
    Modulus(u64),
    #[error("dimension {0} unsupported (need 1..=16 and m^n < 2^63)")]
    Dimension(usize),
    #[error("generators disagree in modulus or dimension")]
    Mismatch,
    #[error("generator {0} is not invertible")]
    NotInvertible(usize),
    #[error("chain has not been verified")]
    Unverified,
    #[error("genus {0} unsupported here")]
    Genus(usize),
    #[error("malformed generator file: {0}")]
    Parse(String),
}

/// Arithmetic context: `n × n` matrices over `Z/m` with `u8` entries.
#[derive(Clone, Debug)]
struct Ring {
    n: usize,
    m: u32,
    mask: Option<u32>,
}

impl Ring {
    fn new(m: u64, n: usize) -> Result<Self, MatGrpError> {
        if !(2..=256).contains(&m) {
            return Err(MatGrpError::Modulus(m));
        }
        if n == 0 || n > 16 || (m as f64).powi(n as i32) >= 2f64.powi(63) {
            return Err(MatGrpError::Dimension(n));
        }
        let mask = m.is_power_of_two().then(|| m as u32 - 1);
        Ok(Ring {
            n,
            m: m as u32,
            mask,
        })
    }

    #[inline]
    fn red(&self, x: u32) -> u8 {
        match self.mask {
            Some(k) => (x & k) as u8,
            None => (x % self.m) as u8,
        }
    }

    fn identity(&self) -> Vec<u8> {
        let n = self.n;
        (0..n * n).map(|k| (k / n == k % n) as u8).collect()
    }

    fn is_identity(&self, a: &[u8]) -> bool {
        let n = self.n;
        a.iter()
            .enumerate()
            .all(|(k, &x)| x == (k / n == k % n) as u8)
    }

    fn mul(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let n = self.n;
        let mut out = vec![0u8; n * n];
        let mut acc = [0u32; 16];
        for i in 0..n {
            acc[..n].fill(0);
            for k in 0..n {
                let x = a[i * n + k] as u32;
                if x == 0 {
                    continue;
                }
                let row = &b[k * n..(k + 1) * n];
                for j in 0..n {
                    acc[j] += x * row[j] as u32;
                }
            }
            for j in 0..n {
                out[i * n + j] = self.red(acc[j]);
            }
        }
        out
    }

    fn apply(&self, a: &[u8], v: &[u8]) -> Vec<u8> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let s: u32 = (0..n).map(|j| a[i * n + j] as u32 * v[j] as u32).sum();
                self.red(s)
            })
            .collect()
    }

    fn key(&self, v: &[u8]) -> u64 {
        v.iter()
            .rev()
            .fold(0u64, |acc, &x| acc * self.m as u64 + x as u64)
    }

    fn to_mat(&self, a: &[u8]) -> MatMod {
        MatMod::from_fn(self.m as u64, self.n, |i, j| a[i * self.n + j] as u64)
    }

    fn encode(&self, a: &MatMod) -> Vec<u8> {
        a.entries().iter().map(|&x| x as u8).collect()
    }

    fn inverse(&self, a: &[u8]) -> Option<Vec<u8>> {
        self.to_mat(a).inverse().ok().map(|inv| self.encode(&inv))
    }

    fn unit_vector(&self, i: usize) -> Vec<u8> {
        (0..self.n).map(|j| (i == j) as u8).collect()
    }
}

/// Point → orbit position; dense table when the vector space is small.
#[derive(Clone, Debug)]
enum OrbitIndex {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

const DENSE_LIMIT: u64 = 1 << 24;
const ABSENT: u32 = u32::MAX;

impl OrbitIndex {
    fn new(space: u64) -> Self {
        if space <= DENSE_LIMIT {
            OrbitIndex::Dense(vec![ABSENT; space as usize])
        } else {
            OrbitIndex::Sparse(HashMap::new())
        }
    }

    #[inline]
    fn get(&self, key: u64) -> Option<usize> {
        match self {
            OrbitIndex::Dense(v) => match v[key as usize] {
                ABSENT => None,
                i => Some(i as usize),
            },
            OrbitIndex::Sparse(h) => h.get(&key).map(|&i| i as usize),
        }
    }

    fn insert(&mut self, key: u64, idx: usize) {
        match self {
            OrbitIndex::Dense(v) => v[key as usize] = idx as u32,
            OrbitIndex::Sparse(h) => {
                h.insert(key, idx as u32);
            }
        }
    }
}

/// An orbit with transversal: `trans[i]` maps the root to `points[i]`.
#[derive(Clone, Debug)]
struct OrbitData {
    index: OrbitIndex,
    points: Vec<Vec<u8>>,
    trans: Vec<Vec<u8>>,
    trans_inv: Vec<Vec<u8>>,
}

impl OrbitData {
    fn new(ring: &Ring, root: Vec<u8>) -> Self {
        let space = (ring.m as u64).saturating_pow(ring.n as u32);
        let mut index = OrbitIndex::new(space);
        index.insert(ring.key(&root), 0);
        OrbitData {
            index,
            points: vec![root],
            trans: vec![ring.identity()],
            trans_inv: vec![ring.identity()],
        }
    }

    fn len(&self) -> usize {
        self.points.len()
    }

    /// Close under `gens`, assuming the orbit is already closed under all but
    /// `gens[fresh..]`.
    fn extend(&mut self, ring: &Ring, gens: &[(Vec<u8>, Vec<u8>)], fresh: usize) {
        let old = self.points.len();
        let mut i = 0;
        while i < self.points.len() {
            let first = if i < old { fresh } else { 0 };
            for (s, s_inv) in &gens[first..] {
                let img = ring.apply(s, &self.points[i]);
                let key = ring.key(&img);
                if self.index.get(key).is_none() {
                    self.index.insert(key, self.points.len());
                    self.trans.push(ring.mul(s, &self.trans[i]));
                    self.trans_inv.push(ring.mul(&self.trans_inv[i], s_inv));
                    self.points.push(img);
                }
            }
            i += 1;
        }
    }
}

/// Orbit of `v` under `gens`, with transversal `t_u` satisfying `t_u v = u`.
pub fn orbit(gens: &[MatMod], v: &[u64]) -> Result<(Vec<Vec<u64>>, Vec<MatMod>), MatGrpError> {
    let ring = ring_for(gens)?;
    let pairs = invert_all(&ring, gens)?;
    let root: Vec<u8> = v.iter().map(|&x| (x % ring.m as u64) as u8).collect();
    let mut o = OrbitData::new(&ring, root);
    o.extend(&ring, &pairs, 0);
    let points = o
        .points
        .iter()
        .map(|p| p.iter().map(|&x| x as u64).collect())
        .collect();
    let trans = o.trans.iter().map(|t| ring.to_mat(t)).collect();
    Ok((points, trans))
}

fn ring_for(gens: &[MatMod]) -> Result<Ring, MatGrpError> {
    let first = gens.first().ok_or(MatGrpError::NoGenerators)?;
    if gens
        .iter()
        .any(|g| g.modulus() != first.modulus() || g.dim() != first.dim())
    {
        return Err(MatGrpError::Mismatch);
    }
    Ring::new(first.modulus(), first.dim())
}

/// An element together with its inverse, both encoded.
type ElementPair = (Vec<u8>, Vec<u8>);

fn invert_all(ring: &Ring, gens: &[MatMod]) -> Result<Vec<ElementPair>, MatGrpError> {
    gens.iter()
        .enumerate()
        .map(|(i, g)| {
            let a = ring.encode(g);
            let inv = ring.inverse(&a).ok_or(MatGrpError::NotInvertible(i))?;
            Ok((a, inv))
        })
        .collect()
}

#[derive(Clone, Debug)]
struct Level {
    base: Vec<u8>,
    orbit: OrbitData,
}

/// Options for [`schreier_sims`].
#[derive(Clone, Debug)]
pub struct SchreierSimsOptions {
    /// Stop the random phase after this many consecutive random elements sift through.
    pub sift_streak: usize,
    /// Stop the random phase as soon as the order bound reaches this value.
    pub target_order: Option<BigUint>,
    /// Run the deterministic Schreier-generator sweep.
    pub verify: bool,
}

impl Default for SchreierSimsOptions {
    fn default() -> Self {
        SchreierSimsOptions {
            sift_streak: 40,
            target_order: None,
            verify: true,
        }
    }
}

/// Base, per-level orbits with transversals, and strong generators.
#[derive(Clone, Debug)]
pub struct StabChain {
    ring: Ring,
    /// Original generators with inverses.
    gens: Vec<ElementPair>,
    /// Strong generators with inverses; `strong_level[i]` is the deepest level
    /// whose base prefix the generator fixes.
    strong: Vec<ElementPair>,
    strong_level: Vec<usize>,
    levels: Vec<Level>,
    verified: bool,
}

/// Product-replacement random elements.
struct ProductReplacement {
    state: Vec<Vec<u8>>,
    acc: Vec<u8>,
    rng: ChaCha8Rng,
}

impl ProductReplacement {
    fn new(ring: &Ring, gens: &[(Vec<u8>, Vec<u8>)], seed: u64) -> Self {
        let mut state: Vec<Vec<u8>> = gens.iter().map(|(g, _)| g.clone()).collect();
        while state.len() < 10 {
            let i = state.len() % gens.len();
            state.push(gens[i].0.clone());
        }
        let mut pr = ProductReplacement {
            state,
            acc: ring.identity(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        for _ in 0..60 {
            pr.next(ring);
        }
        pr
    }

    fn next(&mut self, ring: &Ring) -> Vec<u8> {
        let len = self.state.len();
        let i = self.rng.gen_range(0..len);
        let mut j = self.rng.gen_range(0..len - 1);
        if j >= i {
            j += 1;
        }
        let prod = if self.rng.gen_bool(0.5) {
            ring.mul(&self.state[i], &self.state[j])
        } else {
            ring.mul(&self.state[j], &self.state[i])
        };
        self.state[i] = prod;
        self.acc = ring.mul(&self.acc, &self.state[i]);
        self.acc.clone()
    }
}

impl StabChain {
    fn empty(ring: Ring, gens: Vec<ElementPair>) -> Self {
        StabChain {
            ring,
            gens,
            strong: Vec::new(),
            strong_level: Vec::new(),
            levels: Vec::new(),
            verified: false,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.ring.m as u64
    }

    pub fn dim(&self) -> usize {
        self.ring.n
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn base(&self) -> Vec<Vec<u64>> {
        self.levels
            .iter()
            .map(|l| l.base.iter().map(|&x| x as u64).collect())
            .collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> Vec<MatMod> {
        self.strong
            .iter()
            .map(|(s, _)| self.ring.to_mat(s))
            .collect()
    }

    /// Product of orbit lengths: the order if verified, a lower bound otherwise.
    pub fn order_bound(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn order(&self) -> Result<BigUint, MatGrpError> {
        if !self.verified {
            return Err(MatGrpError::Unverified);
        }
        Ok(self.order_bound())
    }

    pub fn contains(&self, m: &MatMod) -> Result<bool, MatGrpError> {
        if !self.verified {
            return Err(MatGrpError::Unverified);
        }
        if m.modulus() != self.modulus() || m.dim() != self.dim() {
            return Ok(false);
        }
        let (res, _) = self.sift(&self.ring.encode(m), 0);
        Ok(self.ring.is_identity(&res))
    }

    /// Uniform random element: a product of one random transversal element per level.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> MatMod {
        let mut acc = self.ring.identity();
        for l in self.levels.iter().rev() {
            let t = &l.orbit.trans[rng.gen_range(0..l.orbit.len())];
            acc = self.ring.mul(t, &acc);
        }
        self.ring.to_mat(&acc)
    }

    /// Strip `x` through levels `from..`; returns the residue and the level
    /// at which it left the chain (`levels.len()` if it passed every level).
    fn sift(&self, x: &[u8], from: usize) -> (Vec<u8>, usize) {
        let mut x = x.to_vec();
        for (i, l) in self.levels.iter().enumerate().skip(from) {
            let img = self.ring.apply(&x, &l.base);
            match l.orbit.index.get(self.ring.key(&img)) {
                Some(j) => x = self.ring.mul(&l.orbit.trans_inv[j], &x),
                None => return (x, i),
            }
        }
        let depth = self.levels.len();
        (x, depth)
    }

    fn gens_for_level(&self, i: usize) -> Vec<ElementPair> {
        self.strong
            .iter()
            .zip(&self.strong_level)
            .filter(|(_, &l)| l >= i)
            .map(|(s, _)| s.clone())
            .collect()
    }

    /// Greedy base point: the standard basis vector moved by `h` with the longest
    /// `⟨h⟩`-orbit, lowest index on ties.
    fn choose_base_point(&self, h: &[u8]) -> Vec<u8> {
        let mut best: Option<(usize, usize)> = None;
        for i in 0..self.ring.n {
            let e = self.ring.unit_vector(i);
            let mut cur = self.ring.apply(h, &e);
            if cur == e {
                continue;
            }
            let mut len = 1;
            while cur != e {
                cur = self.ring.apply(h, &cur);
                len += 1;
            }
            if best.is_none_or(|(_, l)| len > l) {
                best = Some((i, len));
            }
        }
        let (i, _) = best.expect("a non-identity matrix moves some basis vector");
        self.ring.unit_vector(i)
    }

    fn add_strong(&mut self, h: Vec<u8>, level: usize) {
        let h_inv = self
            .ring
            .inverse(&h)
            .expect("group elements are invertible");
        if level == self.levels.len() {
            let base = self.choose_base_point(&h);
            let orbit = OrbitData::new(&self.ring, base.clone());
            self.levels.push(Level { base, orbit });
        }
        self.strong.push((h, h_inv));
        self.strong_level.push(level);
        for i in 0..=level {
            let gens = self.gens_for_level(i);
            let fresh = gens.len() - 1;
            let ring = self.ring.clone();
            self.levels[i].orbit.extend(&ring, &gens, fresh);
        }
    }

    fn random_phase(&mut self, seed: u64, opts: &SchreierSimsOptions) {
        let mut pr = ProductReplacement::new(&self.ring, &self.gens, seed);
        let mut streak = 0;
        while streak < opts.sift_streak {
            if let Some(t) = &opts.target_order {
                if self.order_bound() >= *t {
                    break;
                }
            }
            let r = pr.next(&self.ring);
            let (res, lvl) = self.sift(&r, 0);
            if self.ring.is_identity(&res) {
                streak += 1;
            } else {
                self.add_strong(res, lvl);
                streak = 0;
            }
        }
    }

    /// Sift every Schreier generator; add any nontrivial residue and repeat.
    fn sweep(&mut self) {
        'restart: loop {
            for i in (0..self.levels.len()).rev() {
                // level 0 may use the original generators: they generate the same group
                let gens = if i == 0 {
                    self.gens.clone()
                } else {
                    self.gens_for_level(i)
                };
                let count = self.levels[i].orbit.len();
                for u in 0..count {
                    for (s, _) in &gens {
                        let l = &self.levels[i];
                        let img = self.ring.apply(s, &l.orbit.points[u]);
                        let j = l
                            .orbit
                            .index
                            .get(self.ring.key(&img))
                            .expect("orbit closed");
                        let sg = self
                            .ring
                            .mul(&l.orbit.trans_inv[j], &self.ring.mul(s, &l.orbit.trans[u]));
                        let (res, lvl) = self.sift(&sg, i + 1);
                        if !self.ring.is_identity(&res) {
                            self.add_strong(res, lvl);
                            continue 'restart;
                        }
                    }
                }
            }
            break;
        }
        self.verified = true;
    }
}

/// Build a stabilizer chain for `⟨gens⟩`.
pub fn schreier_sims(
    gens: &[MatMod],
    seed: u64,
    opts: &SchreierSimsOptions,
) -> Result<StabChain, MatGrpError> {
    let ring = ring_for(gens)?;
    let pairs = invert_all(&ring, gens)?;
    let mut chain = StabChain::empty(ring, pairs.clone());
    for (g, _) in &pairs {
        let (res, lvl) = chain.sift(g, 0);
        if !chain.ring.is_identity(&res) {
            chain.add_strong(res, lvl);
        }
    }
    if chain.strong.is_empty() {
        chain.verified = true;
        return Ok(chain);
    }
    chain.random_phase(seed, opts);
    if opts.verify {
        chain.sweep();
    }
    Ok(chain)
}

/// Transvection `v ↦ v + c⟨v, u⟩u` for the adjacent-pairs form.
pub fn transvection(g: usize, m: u64, u: &[u64], c: u64) -> MatMod {
    let form = SympForm::adjacent_pairs(g, m);
    let w = form.gram().apply(u);
    MatMod::from_fn(m, 2 * g, |i, j| {
        ((i == j) as u64 + c % m * u[i] % m * w[j]) % m
    })
}

fn transvection_vectors(g: usize) -> Vec<Vec<u64>> {
    let n = 2 * g;
    let mut out = Vec::new();
    for i in 0..n {
        out.push((0..n).map(|k| (k == i) as u64).collect());
        for j in i + 1..n {
            out.push((0..n).map(|k| (k == i || k == j) as u64).collect());
        }
    }
    out
}

/// Transvections in `e_i` and `e_i + e_j`, generating `Sp_{2g}(Z/m)`.
pub fn sp_generators(g: usize, m: u64) -> Vec<MatMod> {
    transvection_vectors(g)
        .iter()
        .map(|u| transvection(g, m, u, 1))
        .collect()
}

/// Lifts of `T_1, …, T_{2g+1}` to `Sp_{2g}(Z/2^k)` as transvections, together with
/// squares of the transvections in `e_i` and `e_i + e_j`.
pub fn preimage_generators(g: usize, k: u32) -> Vec<MatMod> {
    let m = 1u64 << k;
    let n = 2 * g;
    let mut out = Vec::new();
    for kk in 1..=2 * g + 1 {
        let half = kk / 2;
        let mut u = vec![0u64; n];
        if kk % 2 == 0 {
            // (x1 + x2) ⊗ y_half
            u[2 * (half - 1)] = 1;
            u[2 * (half - 1) + 1] = 1;
        } else {
            // x1 ⊗ (y_half + y_{half+1}), out-of-range terms dropped
            for y in [half, half + 1] {
                if (1..=g).contains(&y) {
                    u[2 * (y - 1)] = 1;
                }
            }
        }
        out.push(transvection(g, m, &u, 1));
    }
    if k > 1 {
        out.extend(
            transvection_vectors(g)
                .iter()
                .map(|u| transvection(g, m, u, 2)),
        );
    }
    out
}

/// Generators of the embedded `S_{2g+2}` in `Sp_{2g}(F_2)`.
pub fn symmetric_generators(g: usize) -> Vec<MatMod> {
    (1..=2 * g + 1)
        .map(|k| transposition_matrix(g, k).expect("k in range"))
        .collect()
}

/// `n!`
pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Outcome of [`verify_preimage_generation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreimageReport {
    pub g: usize,
    pub k: u32,
    pub generator_count: usize,
    /// (i) every generator is symplectic with multiplier 1 modulo `2^k`.
    pub symplectic: bool,
    /// (ii) every generator reduces into the embedded `S_{2g+2}`.
    pub mod2_in_image: bool,
    /// (ii) order of the mod-2 reduction and the target `(2g+2)!`.
    pub mod2_order: String,
    pub mod2_target: String,
    pub generates_mod2: bool,
    /// (iii) order of `⟨gens⟩` (lower bound from the chain) against the preimage order.
    pub order: String,
    pub target_order: String,
    pub order_matches: bool,
    /// The full Schreier-generator sweep was run on the mod-`2^k` chain.
    pub chain_verified: bool,
    pub orbit_lengths: Vec<usize>,
}

impl PreimageReport {
    pub fn passed(&self) -> bool {
        self.symplectic && self.mod2_in_image && self.generates_mod2 && self.order_matches
    }

    /// Name of the first failing check, if any.
    pub fn failure(&self) -> Option<&'static str> {
        if !self.symplectic {
            Some("generators are not symplectic with multiplier 1")
        } else if !self.mod2_in_image {
            Some("mod-2 reduction leaves the embedded symmetric group")
        } else if !self.generates_mod2 {
            Some("mod-2 reduction does not generate the embedded symmetric group")
        } else if !self.order_matches {
            Some("group order differs from the full preimage")
        } else {
            None
        }
    }
}

/// Certify `⟨gens⟩ = π^{-1}(S_{2g+2})` in `Sp_{2g}(Z/2^k)` by the order route:
/// containment gives `|⟨gens⟩| <= |S_{2g+2}|·2^{(k-1)(2g²+g)}`, and the chain's
/// orbit product gives the matching lower bound.
pub fn verify_preimage_generation(
    g: usize,
    k: u32,
    gens: &[MatMod],
    seed: u64,
    full_sweep: bool,
) -> Result<PreimageReport, MatGrpError> {
    if !(1..=6).contains(&g) || k == 0 || k > 6 {
        return Err(MatGrpError::Genus(g));
    }
    let m = 1u64 << k;
    if gens.is_empty() {
        return Err(MatGrpError::NoGenerators);
    }
    if gens.iter().any(|x| x.modulus() != m || x.dim() != 2 * g) {
        return Err(MatGrpError::Mismatch);
    }
    let form = SympForm::adjacent_pairs(g, m);
    let symplectic = gens.iter().all(|x| form.is_symplectic(x));

    let sym_chain = schreier_sims(
        &symmetric_generators(g),
        seed,
        &SchreierSimsOptions::default(),
    )?;
    let reduced: Vec<MatMod> = gens.iter().map(|x| x.reduce(2)).collect();
    let mut mod2_in_image = true;
    for r in &reduced {
        mod2_in_image &= sym_chain.contains(r)?;
    }
    let mod2_chain = schreier_sims(&reduced, seed, &SchreierSimsOptions::default())?;
    let mod2_order = mod2_chain.order()?;
    let mod2_target = factorial(2 * g + 2);

    let target = &mod2_target * BigUint::from(2u32).pow((k - 1) * (2 * g * g + g) as u32);
    let opts = SchreierSimsOptions {
        sift_streak: 40,
        target_order: Some(target.clone()),
        verify: full_sweep,
    };
    let chain = schreier_sims(gens, seed, &opts)?;
    let order = chain.order_bound();
    Ok(PreimageReport {
        g,
        k,
        generator_count: gens.len(),
        symplectic,
        mod2_in_image,
        generates_mod2: mod2_in_image && mod2_order == mod2_target,
        mod2_order: mod2_order.to_string(),
        mod2_target: mod2_target.to_string(),
        // with containment, the lower bound reaching the target pins the order
        order_matches: symplectic && mod2_in_image && order == target,
        order: order.to_string(),
        target_order: target.to_string(),
        chain_verified: chain.is_verified(),
        orbit_lengths: chain.orbit_lengths(),
    })
}

/// Result of one falsifier trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FalsifierTrial {
    pub generators_surject_mod2: bool,
    pub full_preimage: bool,
}

/// Statistical support for "no proper subgroup of the mod-`2^k` preimage surjects
/// onto `S_{2g+2}`": draw two random elements of the preimage, keep the pair
/// when it generates `S_{2g+2}` modulo 2, and test whether it generates the whole
/// preimage. Evidence only, not a proof.
pub fn random_falsifier(
    g: usize,
    k: u32,
    trials: usize,
    seed: u64,
) -> Result<Vec<FalsifierTrial>, MatGrpError> {
    let full = schreier_sims(
        &preimage_generators(g, k),
        seed,
        &SchreierSimsOptions::default(),
    )?;
    let target = full.order()?;
    let s_target = factorial(2 * g + 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut out = Vec::new();
    while out.len() < trials {
        let pair = [full.random_element(&mut rng), full.random_element(&mut rng)];
        let reduced: Vec<MatMod> = pair.iter().map(|x| x.reduce(2)).collect();
        let mod2 = schreier_sims(&reduced, rng.gen(), &SchreierSimsOptions::default())?;
        if mod2.order()? != s_target {
            continue;
        }
        let opts = SchreierSimsOptions {
            sift_streak: 40,
            target_order: Some(target.clone()),
            verify: false,
        };
        let chain = schreier_sims(&pair, rng.gen(), &opts)?;
        out.push(FalsifierTrial {
            generators_surject_mod2: true,
            full_preimage: chain.order_bound() == target,
        });
    }
    Ok(out)
}

/// Generator file layout: row-major integer matrices with their modulus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorFile {
    pub modulus: u64,
    pub dimension: usize,
    pub generators: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl GeneratorFile {
    pub fn from_json(s: &str) -> Result<Self, MatGrpError> {
        serde_json::from_str(s).map_err(|e| MatGrpError::Parse(e.to_string()))
    }

    pub fn matrices(&self) -> Result<Vec<MatMod>, MatGrpError> {
        self.generators
            .iter()
            .map(|g| {
                MatMod::new(self.modulus, self.dimension, g)
                    .map_err(|e| MatGrpError::Parse(e.to_string()))
            })
            .collect()
    }
}

/// Order of `Sp_{2g}(Z/2^k)` computed from a stabilizer chain.
pub fn sp_order_by_chain(g: usize, k: u32, seed: u64) -> Result<BigUint, MatGrpError> {
    schreier_sims(
        &sp_generators(g, 1 << k),
        seed,
        &SchreierSimsOptions::default(),
    )?
    .order()
}

/// Order of the image of `S_{2g+2}` in `Sp_{2g}(F_2)`.
pub fn embedded_symmetric_order(g: usize, seed: u64) -> Result<BigUint, MatGrpError> {
    schreier_sims(
        &symmetric_generators(g),
        seed,
        &SchreierSimsOptions::default(),
    )?
    .order()
}

/// Expected order of `Sp_{2g}(Z/2^k)` from the layer formula.
pub fn sp_order_formula(g: usize, k: u32) -> BigUint {
    group_order(g, k)
}

/// Embedded image of an explicit permutation (convenience for tests and the CLI).
pub fn embedded(g: usize, sigma: &Permutation) -> MatMod {
    embed_permutation(g, sigma).expect("degree checked by caller")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group() {
        let id = MatMod::identity(8, 4);
        let c = schreier_sims(
            std::slice::from_ref(&id),
            1,
            &SchreierSimsOptions::default(),
        )
        .unwrap();
        assert_eq!(c.order().unwrap(), BigUint::one());
        assert!(c.contains(&id).unwrap());
        let (pts, _) = orbit(&[id], &[1, 0, 0, 0]).unwrap();
        assert_eq!(pts.len(), 1);
    }

    #[test]
    fn orbits_of_sp4_and_s6() {
        let (pts, trans) = orbit(&sp_generators(2, 2), &[1, 0, 0, 0]).unwrap();
        assert_eq!(pts.len(), 15);
        for (p, t) in pts.iter().zip(&trans) {
            assert_eq!(t.apply(&[1, 0, 0, 0]), *p);
        }
    }

    #[test]
    fn symmetric_images() {
        assert_eq!(
            embedded_symmetric_order(2, 1).unwrap(),
            BigUint::from(720u32)
        );
        assert_eq!(
            embedded_symmetric_order(3, 1).unwrap(),
            BigUint::from(40320u32)
        );
    }

    #[test]
    fn sp_orders_match_formula() {
        for (g, k) in [(2, 1), (2, 2), (2, 3), (3, 1)] {
            assert_eq!(
                sp_order_by_chain(g, k, 3).unwrap(),
                sp_order_formula(g, k),
                "g={g} k={k}"
            );
        }
    }

    #[test]
    fn membership() {
        let c = schreier_sims(&sp_generators(2, 2), 9, &SchreierSimsOptions::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let a = c.random_element(&mut rng);
            let b = c.random_element(&mut rng);
            assert!(c.contains(&a.mul(&b)).unwrap());
        }
        // invertible but not symplectic
        let shear = MatMod::identity(2, 4).add(&MatMod::unit(2, 4, 0, 2));
        assert!(shear.inverse().is_ok());
        assert!(!c.contains(&shear).unwrap());
        for s in c.strong_generators() {
            assert!(c.contains(&s).unwrap());
        }
    }

    #[test]
    fn augmentation_keeps_order() {
        let gens = symmetric_generators(2);
        let base = schreier_sims(&gens, 4, &SchreierSimsOptions::default())
            .unwrap()
            .order()
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for t in 0..10 {
            let mut aug = gens.clone();
            let a = gens[rng.gen_range(0..gens.len())].mul(&gens[rng.gen_range(0..gens.len())]);
            aug.push(a);
            let c = schreier_sims(&aug, t, &SchreierSimsOptions::default()).unwrap();
            assert_eq!(c.order().unwrap(), base);
        }
    }

    #[test]
    fn genus_two_preimage() {
        let gens = preimage_generators(2, 3);
        let r = verify_preimage_generation(2, 3, &gens, 1, true).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(
            r.target_order,
            (BigUint::from(720u32) << 20usize).to_string()
        );
    }

    #[test]
    fn generator_file_roundtrip() {
        let f = GeneratorFile {
            modulus: 8,
            dimension: 2,
            generators: vec![vec![1, 1, 0, 1], vec![1, 0, -1, 1]],
            label: None,
        };
        let s = serde_json::to_string(&f).unwrap();
        let back = GeneratorFile::from_json(&s).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.matrices().unwrap()[1].get(1, 0), 7);
    }
}
