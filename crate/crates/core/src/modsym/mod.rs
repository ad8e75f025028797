//! Weight-`k` modular symbols for `Gamma0(N)` in Manin-symbol form.
//!
//! A Manin symbol `[X^i Y^{k-2-i}, (u:v)]` is `g (P {0, oo})` for any `g`
//! in `SL_2(Z)` with bottom row `(u, v)`. Matrices act on the right:
//! `[P, (u:v)] h = [P(aX + bY, cX + dY), (ua + vc : ub + vd)]`.
//!
//! Construction is split in two. [`ModularSymbols`] holds everything that
//! does not depend on the coefficient field: the symbol classes left after
//! the two-term (and optionally star) identifications, the three-term
//! relations over those classes, and the boundary data. A
//! [`ModSymPresentation`] is that skeleton solved over a particular field.

pub mod cusps;
pub mod heilbronn;
pub mod p1;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    charpoly_hessenberg, multimodular_charpoly, rref, sparse_rref, CharPoly, Field, Matrix,
    PrimeField, Rationals, SparseMatrix,
};
use crate::ntheory::is_prime;
use crate::traceformula::{dim_cusp_forms, SpaceSpec};

pub use cusps::{cusps_equivalent, Cusp, CuspClasses};
pub use heilbronn::heilbronn_matrices;
pub use p1::{lift_to_sl2, p1_list, p1_normalize, P1List, ProjectivePoint};

const SIGMA: [i64; 4] = [0, -1, 1, 0];
const TAU: [i64; 4] = [0, -1, 1, -1];
const TAU2: [i64; 4] = [-1, 1, -1, 0];

/// Fill above which sparse elimination switches to dense rows.
pub const DEFAULT_DENSE_CROSSOVER: f64 = 0.30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    /// The full space.
    None,
    /// The quotient by `x - x*`, isomorphic to the `+1` eigenspace of the
    /// star involution.
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ManinSymbol {
    pub i: u32,
    pub point: ProjectivePoint,
}

/// Resource guards for building presentations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModSymCaps {
    /// Bound on the number of Manin symbols `(k - 1) psi(N)`.
    pub max_generators: u64,
    /// Bound on the total size of the three-term relation matrix.
    pub max_relation_entries: u64,
    /// Bound on the bit size of the characteristic-polynomial coefficient
    /// bound used by the multi-modular charpoly.
    pub max_coefficient_bits: u64,
}

impl Default for ModSymCaps {
    fn default() -> Self {
        ModSymCaps { max_generators: 50_000, max_relation_entries: 2_000_000, max_coefficient_bits: 200_000 }
    }
}

/// Coefficients of `(aX + bY)^i (cX + dY)^{k-2-i}`: `table[i][j]` is the
/// coefficient of `X^j Y^{k-2-j}`.
pub fn action_table(m: [i64; 4], k: u32) -> Vec<Vec<BigInt>> {
    let w = (k - 2) as usize;
    let powers = |x: i64, y: i64| {
        let mut out = vec![vec![BigInt::one()]];
        for e in 1..=w {
            let prev = &out[e - 1];
            let mut next = vec![BigInt::zero(); e + 1];
            for (j, c) in prev.iter().enumerate() {
                next[j + 1] += c * x;
                next[j] += c * y;
            }
            out.push(next);
        }
        out
    };
    let pa = powers(m[0], m[1]);
    let pc = powers(m[2], m[3]);
    (0..=w)
        .map(|i| {
            let mut row = vec![BigInt::zero(); w + 1];
            for (s, a) in pa[i].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (t, c) in pc[w - i].iter().enumerate() {
                    row[s + t] += a * c;
                }
            }
            row
        })
        .collect()
}

/// Union-find over symbols with relations `x = +-y` and `x = 0`.
struct SignedUnionFind {
    parent: Vec<u32>,
    sign: Vec<i8>,
    zero: Vec<bool>,
}

impl SignedUnionFind {
    fn new(n: usize) -> Self {
        SignedUnionFind { parent: (0..n as u32).collect(), sign: vec![1; n], zero: vec![false; n] }
    }

    fn find(&mut self, x: usize) -> (usize, i8) {
        let p = self.parent[x] as usize;
        if p == x {
            return (x, 1);
        }
        let (root, s) = self.find(p);
        self.parent[x] = root as u32;
        self.sign[x] *= s;
        (root, self.sign[x])
    }

    /// Imposes `x = s y`.
    fn union(&mut self, x: usize, y: usize, s: i8) {
        let (rx, sx) = self.find(x);
        let (ry, sy) = self.find(y);
        let rel = sx * s * sy;
        if rx == ry {
            if rel == -1 {
                self.zero[rx] = true;
            }
            return;
        }
        let (child, root) = if rx > ry { (rx, ry) } else { (ry, rx) };
        self.parent[child] = root as u32;
        self.sign[child] = rel;
        self.zero[root] |= self.zero[child];
    }
}

/// Field-independent part of a modular-symbols space.
#[derive(Debug, Clone)]
pub struct ModularSymbols {
    space: SpaceSpec,
    sign: Sign,
    p1: P1List,
    /// `(class, sign)` of each symbol, `None` for symbols forced to zero.
    class_of: Vec<Option<(u32, i8)>>,
    /// Representative symbol of each class.
    reps: Vec<usize>,
    /// Three-term relations over classes.
    relations: Vec<Vec<(usize, BigInt)>>,
    /// Boundary of each class over cusp-class coordinates.
    boundary: Vec<Vec<(usize, i64)>>,
    cusp_count: usize,
    caps: ModSymCaps,
}

impl ModularSymbols {
    pub fn new(space: SpaceSpec, sign: Sign) -> Result<Self> {
        Self::with_caps(space, sign, ModSymCaps::default())
    }

    pub fn with_caps(space: SpaceSpec, sign: Sign, caps: ModSymCaps) -> Result<Self> {
        check_caps(&space, &caps)?;
        let level = space.level();
        let k = space.weight();
        let p1 = P1List::new(level)?;
        let w = (k - 1) as usize;
        let n = p1.len() * w;
        let sym = |pt: usize, i: usize| pt * w + i;
        let kk = k as usize - 2;

        let mut uf = SignedUnionFind::new(n);
        for pt in 0..p1.len() {
            let spt = p1.act(pt, SIGMA).unwrap();
            let jpt = p1.act(pt, [-1, 0, 0, 1]).unwrap();
            for i in 0..=kk {
                // x + x sigma = 0 with e_i | sigma = (-1)^i e_{k-2-i}
                uf.union(sym(pt, i), sym(spt, kk - i), if i % 2 == 0 { -1 } else { 1 });
                if sign == Sign::Plus {
                    uf.union(sym(pt, i), sym(jpt, i), if i % 2 == 0 { 1 } else { -1 });
                }
            }
        }
        let mut class_of = vec![None; n];
        let mut reps = Vec::new();
        let mut root_class: HashMap<usize, u32> = HashMap::new();
        for x in 0..n {
            let (r, s) = uf.find(x);
            if uf.zero[r] {
                continue;
            }
            let c = *root_class.entry(r).or_insert_with(|| {
                reps.push(r);
                (reps.len() - 1) as u32
            });
            class_of[x] = Some((c, s));
        }

        let t1 = action_table(TAU, k);
        let t2 = action_table(TAU2, k);
        let mut relations = Vec::new();
        for pt in 0..p1.len() {
            let a = p1.act(pt, TAU).unwrap();
            let b = p1.act(pt, TAU2).unwrap();
            if a < pt || b < pt {
                continue;
            }
            for i in 0..=kk {
                let mut row: Vec<(usize, BigInt)> = Vec::new();
                let mut push = |s: usize, c: &BigInt| {
                    if let Some((cl, sg)) = class_of[s] {
                        if !c.is_zero() {
                            row.push((cl as usize, if sg == 1 { c.clone() } else { -c }));
                        }
                    }
                };
                push(sym(pt, i), &BigInt::one());
                for j in 0..=kk {
                    push(sym(a, j), &t1[i][j]);
                    push(sym(b, j), &t2[i][j]);
                }
                row.sort_by_key(|e| e.0);
                let mut merged: Vec<(usize, BigInt)> = Vec::with_capacity(row.len());
                for (c, v) in row {
                    match merged.last_mut() {
                        Some(last) if last.0 == c => last.1 += v,
                        _ => merged.push((c, v)),
                    }
                }
                merged.retain(|e| !e.1.is_zero());
                if !merged.is_empty() {
                    relations.push(merged);
                }
            }
        }

        // boundary: [e_i, g] -> [i = k-2] {g oo} - [i = 0] {g 0}
        let mut classes = CuspClasses::new(level);
        let mut raw: Vec<Vec<(usize, i64)>> = Vec::with_capacity(reps.len());
        for &r in &reps {
            let (pt, i) = (r / w, r % w);
            let [a, b, c, d] = lift_to_sl2(p1.point(pt), level);
            let mut terms = Vec::new();
            if i == kk {
                terms.push((classes.class_of(Cusp::new(a, c)), 1));
            }
            if i == 0 {
                terms.push((classes.class_of(Cusp::new(b, d)), -1));
            }
            raw.push(terms);
        }
        let cusp_map: Vec<usize> = match sign {
            Sign::None => (0..classes.len()).collect(),
            Sign::Plus => {
                let reps_full: Vec<Cusp> = classes.representatives().to_vec();
                let partner: Vec<usize> = reps_full.iter().map(|c| classes.class_of(c.negate())).collect();
                let total = classes.len();
                let mut label = vec![usize::MAX; total];
                let mut next = 0;
                for (i, &j) in partner.iter().enumerate() {
                    if label[i] == usize::MAX {
                        let l = if j < total && label[j] != usize::MAX { label[j] } else {
                            next += 1;
                            next - 1
                        };
                        label[i] = l;
                        if j < total {
                            label[j] = l;
                        }
                    }
                }
                for l in label.iter_mut() {
                    if *l == usize::MAX {
                        *l = next;
                        next += 1;
                    }
                }
                label
            }
        };
        let cusp_count = cusp_map.iter().copied().max().map_or(0, |m| m + 1);
        let boundary = raw
            .into_iter()
            .map(|terms| {
                let mut acc: Vec<(usize, i64)> = Vec::new();
                for (c, v) in terms {
                    let c = cusp_map[c];
                    match acc.iter_mut().find(|e| e.0 == c) {
                        Some(e) => e.1 += v,
                        None => acc.push((c, v)),
                    }
                }
                acc.retain(|e| e.1 != 0);
                acc
            })
            .collect();

        Ok(ModularSymbols { space, sign, p1, class_of, reps, relations, boundary, cusp_count, caps })
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn caps(&self) -> &ModSymCaps {
        &self.caps
    }

    pub fn p1(&self) -> &P1List {
        &self.p1
    }

    pub fn generator_count(&self) -> usize {
        self.class_of.len()
    }

    /// Manin symbols in index order.
    pub fn generators(&self) -> Vec<ManinSymbol> {
        let w = self.space.weight() as usize - 1;
        (0..self.class_of.len())
            .map(|s| ManinSymbol { i: (s % w) as u32, point: self.p1.point(s / w) })
            .collect()
    }

    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    fn symbol_index(&self, point: usize, i: usize) -> usize {
        point * (self.space.weight() as usize - 1) + i
    }

    /// Solves the presentation over `field`.
    pub fn over<F: Field + Clone>(&self, field: F) -> Result<ModSymPresentation<'_, F>> {
        ModSymPresentation::new(self, field)
    }

    /// Expected cuspidal dimension from the dimension formula.
    pub fn expected_cuspidal_dim(&self) -> Result<usize> {
        let d = dim_cusp_forms(&self.space)? as usize;
        Ok(match self.sign {
            Sign::Plus => d,
            Sign::None => 2 * d,
        })
    }
}

/// A modular-symbols space solved over a field: quotient basis, the
/// expression of every symbol class in it, and the cuspidal subspace.
pub struct ModSymPresentation<'a, F: Field> {
    skeleton: &'a ModularSymbols,
    field: F,
    /// Classes forming the quotient basis.
    free: Vec<usize>,
    /// `classes x free`: each class in the quotient basis.
    expr: Matrix<F::Elem>,
    /// Class -> position in `free`, for basis classes.
    free_pos: Vec<Option<usize>>,
    /// Cuspidal basis, rows in quotient coordinates.
    cusp_basis: Matrix<F::Elem>,
    /// Coordinates where `cusp_basis` is the identity.
    cusp_pivots: Vec<usize>,
    boundary: Matrix<F::Elem>,
}

impl<'a, F: Field + Clone> ModSymPresentation<'a, F> {
    fn new(skeleton: &'a ModularSymbols, field: F) -> Result<Self> {
        let f = &field;
        let classes = skeleton.class_count();
        let mut rel = SparseMatrix::new(classes);
        for row in &skeleton.relations {
            rel.push_row(f, row.iter().map(|(c, v)| (*c, f.from_bigint(v))).collect());
        }
        let (form, pivots) = sparse_rref(f, &rel, DEFAULT_DENSE_CROSSOVER);
        let mut pivot_row = vec![None; classes];
        for (r, &c) in pivots.iter().enumerate() {
            pivot_row[c] = Some(r);
        }
        let free: Vec<usize> = (0..classes).filter(|&c| pivot_row[c].is_none()).collect();
        let mut free_pos = vec![None; classes];
        for (p, &c) in free.iter().enumerate() {
            free_pos[c] = Some(p);
        }
        let mut expr = Matrix::zeros(f, classes, free.len());
        for c in 0..classes {
            match (free_pos[c], pivot_row[c]) {
                (Some(p), _) => expr.set(c, p, f.one()),
                (None, Some(r)) => {
                    for (p, &fc) in free.iter().enumerate() {
                        let v = form.get(r, fc);
                        if !f.is_zero(v) {
                            expr.set(c, p, f.neg(v));
                        }
                    }
                }
                (None, None) => unreachable!(),
            }
        }
        let mut boundary = Matrix::zeros(f, free.len(), skeleton.cusp_count);
        for (p, &c) in free.iter().enumerate() {
            for &(cusp, v) in &skeleton.boundary[c] {
                boundary.set(p, cusp, f.from_i64(v));
            }
        }
        // cuspidal = {x : x B = 0}; kernel of B^T in RREF-derived form
        let bt = boundary.transpose();
        let mut bt_form = bt.clone();
        let bt_pivots = rref(f, &mut bt_form);
        let cusp_basis = crate::linalg::dense::kernel_from_rref(f, &bt_form, &bt_pivots);
        let mut is_pivot = vec![false; free.len()];
        for &p in &bt_pivots {
            is_pivot[p] = true;
        }
        let cusp_pivots: Vec<usize> = (0..free.len()).filter(|&c| !is_pivot[c]).collect();
        Ok(ModSymPresentation { skeleton, field, free, expr, free_pos, cusp_basis, cusp_pivots, boundary })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn skeleton(&self) -> &ModularSymbols {
        self.skeleton
    }

    /// Dimension of the whole (signed) modular-symbols space.
    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    pub fn cuspidal_dim(&self) -> usize {
        self.cusp_basis.rows()
    }

    pub fn cuspidal_basis(&self) -> &Matrix<F::Elem> {
        &self.cusp_basis
    }

    pub fn boundary_matrix(&self) -> &Matrix<F::Elem> {
        &self.boundary
    }

    /// Quotient-basis representative symbols.
    pub fn basis_symbols(&self) -> Vec<ManinSymbol> {
        let gens = self.skeleton.generators();
        self.free.iter().map(|&c| gens[self.skeleton.reps[c]]).collect()
    }

    /// Coordinates of a Manin symbol in the quotient basis.
    pub fn symbol_vector(&self, s: &ManinSymbol) -> Result<Vec<F::Elem>> {
        let pt = self
            .skeleton
            .p1
            .index_of(s.point.c as i64, s.point.d as i64)
            .ok_or_else(|| Error::InvalidArgument(format!("{:?} is not in P1", s.point)))?;
        let f = &self.field;
        match self.skeleton.class_of[self.skeleton.symbol_index(pt, s.i as usize)] {
            None => Ok(vec![f.zero(); self.free.len()]),
            Some((c, sg)) => {
                let row = self.expr.row(c as usize);
                Ok(if sg == 1 { row.to_vec() } else { row.iter().map(|x| f.neg(x)).collect() })
            }
        }
    }

    /// Accumulates `sum coef * class` of the images of a basis symbol
    /// under the given matrices into class coordinates.
    fn image_in_classes(&self, basis: usize, tables: &[([i64; 4], Vec<Vec<F::Elem>>)], acc: &mut [F::Elem], touched: &mut Vec<usize>) {
        let f = &self.field;
        let sk = self.skeleton;
        let w = sk.space.weight() as usize - 1;
        let r = sk.reps[self.free[basis]];
        let (pt, i) = (r / w, r % w);
        for (m, table) in tables {
            let Some(q) = sk.p1.act(pt, *m) else { continue };
            for (j, coef) in table[i].iter().enumerate() {
                if f.is_zero(coef) {
                    continue;
                }
                if let Some((c, sg)) = sk.class_of[q * w + j] {
                    let c = c as usize;
                    if f.is_zero(&acc[c]) {
                        touched.push(c);
                    }
                    acc[c] = if sg == 1 { f.add(&acc[c], coef) } else { f.sub(&acc[c], coef) };
                }
            }
        }
    }

    /// Matrix (on the cuspidal basis) of the operator `x -> sum_m x m`.
    fn operator_on_cuspidal(&self, mats: &[[i64; 4]]) -> Matrix<F::Elem> {
        let f = &self.field;
        let k = self.skeleton.space.weight();
        let tables: Vec<([i64; 4], Vec<Vec<F::Elem>>)> = mats
            .iter()
            .map(|&m| (m, action_table(m, k).iter().map(|row| row.iter().map(|x| f.from_bigint(x)).collect()).collect()))
            .collect();
        let d = self.cuspidal_dim();
        let classes = self.skeleton.class_count();
        // images of basis symbols, restricted to the cuspidal pivot columns
        let mut img = Matrix::zeros(f, self.free.len(), d);
        let mut acc = vec![f.zero(); classes];
        let mut touched = Vec::new();
        let used: Vec<bool> =
            (0..self.free.len()).map(|b| (0..d).any(|r| !f.is_zero(self.cusp_basis.get(r, b)))).collect();
        for b in 0..self.free.len() {
            if !used[b] {
                continue;
            }
            self.image_in_classes(b, &tables, &mut acc, &mut touched);
            let row = img.row_mut(b);
            for &c in &touched {
                let a = std::mem::replace(&mut acc[c], f.zero());
                if f.is_zero(&a) {
                    continue;
                }
                match self.free_pos[c] {
                    Some(p) => {
                        if let Ok(j) = self.cusp_pivots.binary_search(&p) {
                            row[j] = f.add(&row[j], &a);
                        }
                    }
                    None => {
                        let e = self.expr.row(c);
                        for (j, &p) in self.cusp_pivots.iter().enumerate() {
                            if !f.is_zero(&e[p]) {
                                f.add_mul_assign(&mut row[j], &a, &e[p]);
                            }
                        }
                    }
                }
            }
            touched.clear();
        }
        self.cusp_basis.mul_in(f, &img).expect("shapes agree")
    }

    /// `T_l` on the cuspidal subspace, acting on row vectors.
    pub fn hecke_matrix(&self, l: u64) -> Result<Matrix<F::Elem>> {
        check_hecke_prime(self.skeleton.space.level(), l)?;
        Ok(self.operator_on_cuspidal(&heilbronn_matrices(l)?))
    }

    /// Star involution on the cuspidal subspace (identity for `Sign::Plus`).
    pub fn star_matrix(&self) -> Matrix<F::Elem> {
        self.operator_on_cuspidal(&[[-1, 0, 0, 1]])
    }
}

/// Checks the generator and relation-size guards without building anything.
pub fn check_caps(space: &SpaceSpec, caps: &ModSymCaps) -> Result<()> {
    let psi = crate::ntheory::psi_index(space.level())?;
    let k = space.weight() as u64;
    let gens = (k - 1) * psi;
    if gens > caps.max_generators {
        return Err(Error::ResourceCap { what: "Manin symbols", value: gens as u128, cap: caps.max_generators as u128 });
    }
    let entries = 2 * ((k - 1) as u128).pow(2) * psi as u128 / 3;
    if entries > caps.max_relation_entries as u128 {
        return Err(Error::ResourceCap { what: "relation entries", value: entries, cap: caps.max_relation_entries as u128 });
    }
    if space.level() > p1::MAX_P1_LEVEL {
        return Err(Error::ResourceCap { what: "P1 level", value: space.level() as u128, cap: p1::MAX_P1_LEVEL as u128 });
    }
    Ok(())
}

/// Checks the coefficient-size guard for a charpoly of `T_l` in dimension `n`.
pub fn check_charpoly_bits(n: usize, l: u64, k: u32, caps: &ModSymCaps) -> Result<BigInt> {
    let bound = deligne_coefficient_bound(n, l, k);
    let bits = bound.bits();
    if bits > caps.max_coefficient_bits {
        return Err(Error::ResourceCap { what: "charpoly coefficient bits", value: bits as u128, cap: caps.max_coefficient_bits as u128 });
    }
    Ok(bound)
}

fn check_hecke_prime(level: u64, l: u64) -> Result<()> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l.to_string()));
    }
    if level % l == 0 {
        return Err(Error::PrimeDividesLevel { p: l, level });
    }
    Ok(())
}

/// Exact presentation over `Q`.
pub fn build_presentation(space: SpaceSpec, sign: Sign) -> Result<ModularSymbols> {
    ModularSymbols::new(space, sign)
}

/// Exact matrix of `T_l` on the cuspidal subspace over `Q`.
pub fn hecke_matrix(ms: &ModularSymbols, l: u64) -> Result<Matrix<BigRational>> {
    ms.over(Rationals)?.hecke_matrix(l)
}

/// `|a_i| <= C(n, i) (2 l^{(k-1)/2})^i` for every eigenvalue system of
/// weight `k`; returns the maximum over `i`.
pub fn deligne_coefficient_bound(n: usize, l: u64, k: u32) -> BigInt {
    let lk = num_traits::pow::pow(BigInt::from(l), (k - 1) as usize);
    let root = (&lk * 4u32).sqrt() + 1u32;
    let mut best = BigInt::one();
    let mut binom = BigInt::one();
    let mut power = BigInt::one();
    for i in 1..=n {
        binom = binom * (n - i + 1) / i;
        power *= &root;
        let b = &binom * &power;
        if b > best {
            best = b;
        }
    }
    best
}

/// Characteristic polynomial of `T_l` on the cuspidal subspace, by
/// Hessenberg reduction modulo word primes and CRT up to the Deligne
/// bound. Primes whose cuspidal dimension differs from the dimension
/// formula are skipped.
pub fn hecke_charpoly_on_cuspforms(ms: &ModularSymbols, l: u64) -> Result<CharPoly> {
    check_hecke_prime(ms.space.level(), l)?;
    let n = ms.expected_cuspidal_dim()?;
    let bound = check_charpoly_bits(n, l, ms.space.weight(), &ms.caps)?;
    let coeffs = multimodular_charpoly(n, &bound, |f: &PrimeField| {
        let pres = ms.over(*f).ok()?;
        if pres.cuspidal_dim() != n {
            return None;
        }
        let t = pres.hecke_matrix(l).ok()?;
        Some(charpoly_hessenberg(f, &t).iter().map(|&c| f.to_u64(c)).collect())
    })?;
    CharPoly::from_integers(coeffs)
}

/// Cuspidal dimension computed modulo a word prime.
pub fn cuspidal_dimension(ms: &ModularSymbols) -> Result<usize> {
    let f = PrimeField::new(crate::linalg::prime_at(0))?;
    Ok(ms.over(f)?.cuspidal_dim())
}

/// Exact trace of `T_l` on the cuspidal subspace over `Q`.
pub fn hecke_trace(ms: &ModularSymbols, l: u64) -> Result<BigRational> {
    let t = hecke_matrix(ms, l)?;
    Ok(t.trace_in(&Rationals))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: u64, k: u32) -> SpaceSpec {
        SpaceSpec::new(n, k).unwrap()
    }

    #[test]
    fn action_table_of_sigma() {
        let t = action_table(SIGMA, 6);
        for i in 0..=4 {
            for j in 0..=4 {
                let expected = if j == 4 - i { if i % 2 == 0 { 1 } else { -1 } } else { 0 };
                assert_eq!(t[i][j], BigInt::from(expected));
            }
        }
    }

    #[test]
    fn small_dimensions_over_q() {
        let ms = ModularSymbols::new(space(11, 2), Sign::None).unwrap();
        assert_eq!(ms.over(Rationals).unwrap().cuspidal_dim(), 2);
        let ms = ModularSymbols::new(space(11, 2), Sign::Plus).unwrap();
        assert_eq!(ms.over(Rationals).unwrap().cuspidal_dim(), 1);
        let ms = ModularSymbols::new(space(1, 12), Sign::None).unwrap();
        assert_eq!(ms.over(Rationals).unwrap().cuspidal_dim(), 2);
        let ms = ModularSymbols::new(space(1, 12), Sign::Plus).unwrap();
        assert_eq!(ms.over(Rationals).unwrap().cuspidal_dim(), 1);
        let ms = ModularSymbols::new(space(14, 6), Sign::Plus).unwrap();
        assert_eq!(ms.over(Rationals).unwrap().cuspidal_dim(), 8);
    }

    #[test]
    fn small_charpolys() {
        let ms = ModularSymbols::new(space(11, 2), Sign::Plus).unwrap();
        let cp = hecke_charpoly_on_cuspforms(&ms, 2).unwrap();
        assert_eq!(cp.integer_coeffs().unwrap(), vec![BigInt::from(1), BigInt::from(2)]);
        let ms = ModularSymbols::new(space(1, 12), Sign::Plus).unwrap();
        let cp = hecke_charpoly_on_cuspforms(&ms, 2).unwrap();
        assert_eq!(cp.integer_coeffs().unwrap(), vec![BigInt::from(1), BigInt::from(24)]);
        assert_eq!(hecke_trace(&ms, 2).unwrap(), BigRational::from_integer((-24).into()));
        assert!(matches!(hecke_matrix(&ModularSymbols::new(space(10, 4), Sign::Plus).unwrap(), 5), Err(Error::PrimeDividesLevel { .. })));
    }

    #[test]
    fn caps_are_enforced() {
        assert!(matches!(ModularSymbols::new(space(1, 3438), Sign::Plus), Err(Error::ResourceCap { .. })));
        let tight = ModSymCaps { max_generators: 100, ..ModSymCaps::default() };
        assert!(ModularSymbols::with_caps(space(11, 12), Sign::Plus, tight).is_err());
    }
}
