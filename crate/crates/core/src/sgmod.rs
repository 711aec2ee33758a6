//! Finite-dimensional modules over `k(S_n)`.
//!
//! A module stores the matrices of the adjacent transpositions `s_1..s_{n-1}`
//! in column convention: column `j` of `A_i` is the image of basis vector `j`.
//! For a right module this gives `R(a * b) = R(b) R(a)`, for a left module
//! `L(a * b) = L(a) L(b)`, with `*` the product of [`crate::natural`].
//!
//! Modules carved out of `gamma_n = k(S_n)` may carry an ambient embedding:
//! one multilinear coordinate vector (indexed by permutations in
//! lexicographic order) per basis vector.

use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldParams, FieldRef};
use crate::linalg::{CoordinateSolver, Matrix, SpanBuilder, Subspace};
use crate::natural::{factorial, sym_group, GroupAlgebraElement, Permutation, MAX_GROUP_DEGREE};
use crate::tensoralg::{tensor_dim, word_from_index, word_index};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaModule {
    field: FieldRef,
    n: usize,
    dim: usize,
    side: Side,
    actions: Vec<Matrix>,
    ambient: Option<Vec<Vec<u32>>>,
}

/// Largest module dimension accepted by the projectivity and decomposition routines.
pub const MAX_MODULE_DIM: usize = 200;

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    field: FieldParams,
    n: usize,
    dim: usize,
    side: Side,
    actions: Vec<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ambient: Option<Vec<Vec<u32>>>,
}

impl SigmaModule {
    pub fn from_matrices(
        field: &FieldRef,
        n: usize,
        dim: usize,
        side: Side,
        actions: Vec<Matrix>,
    ) -> Result<SigmaModule> {
        if n > MAX_GROUP_DEGREE {
            return Err(Error::DegreeOutOfRange(n));
        }
        if actions.len() != n.saturating_sub(1) {
            return Err(Error::DimensionMismatch(format!("{} action matrices for S_{n}", actions.len())));
        }
        if actions.iter().any(|a| a.rows() != dim || a.cols() != dim) {
            return Err(Error::DimensionMismatch(format!("action matrices must be {dim}x{dim}")));
        }
        let m = SigmaModule { field: field.clone(), n, dim, side, actions, ambient: None };
        m.check_relations()?;
        Ok(m)
    }

    /// Coxeter relations: involutions, braid and commuting relations.
    pub fn check_relations(&self) -> Result<()> {
        let f = &self.field;
        let a = &self.actions;
        for (i, ai) in a.iter().enumerate() {
            if !ai.mul(f, ai).is_identity() {
                return Err(Error::InvalidInput(format!("s_{} does not square to 1", i + 1)));
            }
            for (j, aj) in a.iter().enumerate().skip(i + 1) {
                let ok = if j == i + 1 {
                    ai.mul(f, aj).mul(f, ai) == aj.mul(f, ai).mul(f, aj)
                } else {
                    ai.mul(f, aj) == aj.mul(f, ai)
                };
                if !ok {
                    return Err(Error::InvalidInput(format!(
                        "Coxeter relation between s_{} and s_{} fails",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// The regular module `k(S_n)` with its permutation basis.
    pub fn regular(field: &FieldRef, n: usize, side: Side) -> Result<SigmaModule> {
        let g = sym_group(n)?;
        let order = g.order();
        let mut actions = Vec::new();
        for i in 1..n {
            let s = Permutation::adjacent(n, i).rank();
            let mut a = Matrix::zeros(order, order);
            for r in 0..order {
                let image = match side {
                    Side::Right => g.product_rank(r, s),
                    Side::Left => g.product_rank(s, r),
                };
                a.set(image, r, 1);
            }
            actions.push(a);
        }
        let ambient = (side == Side::Right).then(|| {
            (0..order)
                .map(|r| {
                    let mut v = vec![0u32; order];
                    v[r] = 1;
                    v
                })
                .collect()
        });
        Ok(SigmaModule { field: field.clone(), n, dim: order, side, actions, ambient })
    }

    pub fn trivial(field: &FieldRef, n: usize, side: Side) -> Result<SigmaModule> {
        SigmaModule::from_matrices(field, n, 1, side, vec![Matrix::identity(1); n.saturating_sub(1)])
    }

    pub fn sign(field: &FieldRef, n: usize, side: Side) -> Result<SigmaModule> {
        let minus = Matrix::from_vec(1, 1, vec![field.neg_raw(1)]);
        SigmaModule::from_matrices(field, n, 1, side, vec![minus; n.saturating_sub(1)])
    }

    /// The right submodule of `k(S_n)` spanned by the given independent
    /// multilinear coordinate vectors.
    pub fn from_right_ideal(field: &FieldRef, n: usize, basis: Vec<Vec<u32>>) -> Result<SigmaModule> {
        let g = sym_group(n)?;
        let order = g.order();
        let solver = CoordinateSolver::new(field, order, &basis)
            .ok_or_else(|| Error::InvalidInput("right ideal basis is dependent".into()))?;
        let mut actions = Vec::new();
        for i in 1..n {
            let s = GroupAlgebraElement::from_perm(field, &Permutation::adjacent(n, i))?;
            let mut a = Matrix::zeros(basis.len(), basis.len());
            for (j, v) in basis.iter().enumerate() {
                let image = GroupAlgebraElement::from_coords(field, n, v.clone())?.mul(&s)?;
                let c = solver.coords(field, image.coords()).ok_or(Error::NotStable(i))?;
                for (r, &x) in c.iter().enumerate() {
                    a.set(r, j, x);
                }
            }
            actions.push(a);
        }
        Ok(SigmaModule { field: field.clone(), n, dim: basis.len(), side: Side::Right, actions, ambient: Some(basis) })
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn side(&self) -> Side {
        self.side
    }
    pub fn actions(&self) -> &[Matrix] {
        &self.actions
    }
    pub fn ambient(&self) -> Option<&[Vec<u32>]> {
        self.ambient.as_deref()
    }
    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// Ambient span of a module carved out of `k(S_n)`.
    pub fn ambient_span(&self) -> Result<Subspace> {
        let amb = self.ambient.as_ref().ok_or(Error::NoAmbient)?;
        Ok(Subspace::from_rows(&self.field, factorial(self.n), amb))
    }

    /// `g` acting on a coordinate vector.
    pub fn act(&self, g: &Permutation, v: &[u32]) -> Vec<u32> {
        let word = g.reduced_word();
        let mut out = v.to_vec();
        let apply = |out: &mut Vec<u32>, i: usize| *out = self.actions[i - 1].mul_vec(&self.field, out);
        match self.side {
            Side::Right => word.iter().for_each(|&i| apply(&mut out, i)),
            Side::Left => word.iter().rev().for_each(|&i| apply(&mut out, i)),
        }
        out
    }

    pub fn group_matrix(&self, g: &Permutation) -> Matrix {
        let mut cols = Vec::with_capacity(self.dim);
        let mut e = vec![0u32; self.dim];
        for j in 0..self.dim {
            e[j] = 1;
            cols.push(self.act(g, &e));
            e[j] = 0;
        }
        Matrix::from_columns(self.dim, &cols)
    }

    /// Matrices of every element of the subgroup generated by `gens`.
    pub fn subgroup_matrices(&self, gens: &[Permutation]) -> Vec<(Permutation, Matrix)> {
        let f = &self.field;
        let gen_mats: Vec<Matrix> = gens.iter().map(|g| self.group_matrix(g)).collect();
        let id = Permutation::identity(self.n);
        let mut seen: BTreeMap<Permutation, usize> = BTreeMap::new();
        let mut out = vec![(id.clone(), Matrix::identity(self.dim))];
        seen.insert(id, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for (h, hm) in gens.iter().zip(&gen_mats) {
                let g = out[k].0.star(h);
                if seen.contains_key(&g) {
                    continue;
                }
                let m = match self.side {
                    Side::Right => hm.mul(f, &out[k].1),
                    Side::Left => out[k].1.mul(f, hm),
                };
                seen.insert(g.clone(), out.len());
                queue.push_back(out.len());
                out.push((g, m));
            }
        }
        out
    }

    /// The submodule spanned by the given vectors (module coordinates).
    pub fn submodule(&self, basis: &[Vec<u32>]) -> Result<SigmaModule> {
        let f = &self.field;
        let solver = CoordinateSolver::new(f, self.dim, basis)
            .ok_or_else(|| Error::InvalidInput("submodule basis is dependent".into()))?;
        let mut actions = Vec::new();
        for (i, a) in self.actions.iter().enumerate() {
            let mut m = Matrix::zeros(basis.len(), basis.len());
            for (j, v) in basis.iter().enumerate() {
                let c = solver.coords(f, &a.mul_vec(f, v)).ok_or(Error::NotStable(i + 1))?;
                for (r, &x) in c.iter().enumerate() {
                    m.set(r, j, x);
                }
            }
            actions.push(m);
        }
        let ambient = self.ambient.as_ref().map(|amb| {
            let order = amb.first().map_or(factorial(self.n), |v| v.len());
            basis
                .iter()
                .map(|v| {
                    let mut out = vec![0u32; order];
                    for (a, &c) in v.iter().enumerate() {
                        f.axpy(&mut out, c, &amb[a]);
                    }
                    out
                })
                .collect()
        });
        Ok(SigmaModule { field: f.clone(), n: self.n, dim: basis.len(), side: self.side, actions, ambient })
    }

    /// `M / S` for a submodule `S` spanned by `sub` (module coordinates). The
    /// quotient basis is the classes of the standard vectors outside the
    /// pivots of `S`.
    pub fn quotient(&self, sub: &[Vec<u32>]) -> Result<SigmaModule> {
        let f = &self.field;
        let s = Subspace::from_rows(f, self.dim, sub);
        for (i, a) in self.actions.iter().enumerate() {
            if !s.is_stable_under(f, a) {
                return Err(Error::NotStable(i + 1));
            }
        }
        let block = QuotientBlock::new(None, s);
        let free = &block.free_coordinates;
        let mut actions = Vec::new();
        for a in &self.actions {
            let mut m = Matrix::zeros(free.len(), free.len());
            for (j, &c) in free.iter().enumerate() {
                let image = block.quotient(f, &a.column(c));
                for (r, &x) in image.iter().enumerate() {
                    m.set(r, j, x);
                }
            }
            actions.push(m);
        }
        Ok(SigmaModule { field: f.clone(), n: self.n, dim: free.len(), side: self.side, actions, ambient: None })
    }

    /// Smallest submodule containing the given vectors.
    pub fn generated_submodule(&self, vectors: &[Vec<u32>]) -> SpanBuilder {
        let mut span = SpanBuilder::new(self.dim);
        self.spin_into(&mut span, vectors);
        span
    }

    fn spin_into(&self, span: &mut SpanBuilder, vectors: &[Vec<u32>]) {
        let f = &self.field;
        let mut queue: VecDeque<Vec<u32>> = VecDeque::new();
        for v in vectors {
            if span.insert(f, v) {
                queue.push_back(v.clone());
            }
        }
        while let Some(v) = queue.pop_front() {
            for a in &self.actions {
                let w = a.mul_vec(f, &v);
                if span.insert(f, &w) {
                    queue.push_back(w);
                }
            }
        }
    }

    /// Module generators chosen greedily among standard basis vectors.
    pub fn module_generators(&self) -> Vec<Vec<u32>> {
        let mut span = SpanBuilder::new(self.dim);
        let mut gens = Vec::new();
        let mut e = vec![0u32; self.dim];
        for j in 0..self.dim {
            if span.dim() == self.dim {
                break;
            }
            e[j] = 1;
            if !span.contains(&self.field, &e) {
                gens.push(e.clone());
                self.spin_into(&mut span, &[e.clone()]);
            }
            e[j] = 0;
        }
        gens
    }

    pub fn direct_sum(&self, other: &SigmaModule) -> Result<SigmaModule> {
        if self.n != other.n {
            return Err(Error::IndexMismatch(self.n, other.n));
        }
        if self.side != other.side {
            return Err(Error::SideMismatch("direct sum of a left and a right module".into()));
        }
        let actions = self.actions.iter().zip(&other.actions).map(|(a, b)| a.direct_sum(b)).collect();
        let ambient = match (&self.ambient, &other.ambient) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        Ok(SigmaModule {
            field: self.field.clone(),
            n: self.n,
            dim: self.dim + other.dim,
            side: self.side,
            actions,
            ambient,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = ModuleJson {
            field: self.field.params().clone(),
            n: self.n,
            dim: self.dim,
            side: self.side,
            actions: self.actions.iter().map(|a| a.row_vecs()).collect(),
            ambient: self.ambient.clone(),
        };
        serde_json::to_value(j).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<SigmaModule> {
        let j: ModuleJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let field = crate::field::field_from_params(&j.field)?;
        let actions = j
            .actions
            .iter()
            .map(|rows| {
                if rows.len() != j.dim || rows.iter().any(|r| r.len() != j.dim) {
                    return Err(Error::DimensionMismatch("action matrix shape".into()));
                }
                if rows.iter().flatten().any(|&x| x >= field.order()) {
                    return Err(Error::InvalidInput("matrix entry outside the field".into()));
                }
                Ok(Matrix::from_rows(j.dim, rows))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut m = SigmaModule::from_matrices(&field, j.n, j.dim, j.side, actions)?;
        if let Some(amb) = j.ambient {
            if amb.len() != j.dim || amb.iter().any(|v| v.len() != factorial(j.n)) {
                return Err(Error::DimensionMismatch("ambient embedding shape".into()));
            }
            m.ambient = Some(amb);
        }
        Ok(m)
    }
}

/// The face map `d_i` on a word over `n` letters: letter `i` is killed and
/// larger letters shift down. Returns `None` when the word is killed.
pub fn face_map_word(i: usize, letters: &[u8]) -> Option<Vec<u8>> {
    letters
        .iter()
        .map(|&l| match (l as usize).cmp(&i) {
            std::cmp::Ordering::Less => Some(l),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(l - 1),
        })
        .collect()
}

/// `d_i : T_k(V_n) -> T_k(V_{n-1})` on dense coordinates.
pub fn face_map_dense(i: usize, n: usize, k: usize, v: &[u32]) -> Result<Vec<u32>> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, bound: n });
    }
    let dim_target = (n - 1).pow(k as u32);
    let mut out = vec![0u32; dim_target];
    let mut letters = vec![0u8; k];
    for (idx, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        word_from_index(idx, k, n, &mut letters);
        if let Some(w) = face_map_word(i, &letters) {
            // no two source words collide with the same nonzero image
            // unless they differ only in letters equal to i, which are killed
            out[word_index(&w, n - 1)] = c;
        }
    }
    Ok(out)
}

/// Matrix of `d_i : T_k(V_n) -> T_k(V_{n-1})`.
pub fn face_map(i: usize, n: usize, k: usize) -> Result<Matrix> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, bound: n });
    }
    let src = n.pow(k as u32);
    let dst = (n - 1).pow(k as u32);
    let mut m = Matrix::zeros(dst, src);
    let mut letters = vec![0u8; k];
    for idx in 0..src {
        word_from_index(idx, k, n, &mut letters);
        if let Some(w) = face_map_word(i, &letters) {
            m.set(word_index(&w, n - 1), idx, 1);
        }
    }
    Ok(m)
}

/// `gamma_n(B)`: the joint kernel of the face maps on `B(V_n)`, with the
/// right action by relabelling. `b_n` lives in `T_n(V_n)`, `b_n1` in `T_n(V_{n-1})`.
pub fn gamma(field: &FieldRef, b_n: &Subspace, b_n1: &Subspace, n: usize) -> Result<SigmaModule> {
    let f = field.as_ref();
    let dim_n = tensor_dim(n, n).ok_or_else(|| Error::CapExceeded("T_n(V_n)".into()))?;
    if b_n.ambient() != dim_n || b_n1.ambient() != (n - 1).pow(n as u32) {
        return Err(Error::DimensionMismatch("gamma expects B(V_n) and B(V_{n-1}) in degree n".into()));
    }
    for v in b_n.basis_vecs() {
        for i in 1..=n {
            let image = face_map_dense(i, n, n, &v)?;
            if !b_n1.contains(f, &image) {
                return Err(Error::NotStable(i));
            }
        }
    }
    // words using every letter are exactly the joint kernel of the face maps
    let g = sym_group(n)?;
    let multilinear: Vec<usize> = g
        .perms()
        .iter()
        .map(|p| {
            let letters: Vec<u8> = p.images().iter().map(|&i| i as u8).collect();
            word_index(&letters, n)
        })
        .collect();
    let mut is_ml = vec![false; dim_n];
    for &i in &multilinear {
        is_ml[i] = true;
    }
    let rest: Vec<usize> = (0..dim_n).filter(|&i| !is_ml[i]).collect();
    let basis = b_n.basis();
    let restricted = basis.select_columns(&rest);
    let combos = restricted.left_kernel(f);
    let mut vectors = Vec::new();
    for r in 0..combos.rows() {
        let v = basis.vec_mul(f, combos.row(r));
        vectors.push(multilinear.iter().map(|&i| v[i]).collect::<Vec<u32>>());
    }
    let span = Subspace::from_rows(f, g.order(), &vectors);
    SigmaModule::from_right_ideal(field, n, span.basis_vecs())
}

/// The left module that a right module is tensored with.
#[derive(Clone, Copy, Debug)]
pub enum LeftModule<'a> {
    /// `V^{(x) n}` with `dim V = m`, acted on by permuting positions.
    TensorPower {
        m: usize,
    },
    Module(&'a SigmaModule),
}

/// One block of `M (x)_{k(S_n)} W`: a quotient of a coordinate space by relations.
#[derive(Clone, Debug)]
pub struct QuotientBlock {
    /// Orbit representative (sorted word) for tensor-power blocks.
    pub representative: Option<Vec<u8>>,
    pub relations: Subspace,
    /// Coordinates whose classes form a basis of the quotient.
    pub free_coordinates: Vec<usize>,
}

impl QuotientBlock {
    fn new(representative: Option<Vec<u8>>, relations: Subspace) -> QuotientBlock {
        let mut pivot = vec![false; relations.ambient()];
        for &p in relations.pivots() {
            pivot[p] = true;
        }
        let free_coordinates = (0..relations.ambient()).filter(|&c| !pivot[c]).collect();
        QuotientBlock { representative, relations, free_coordinates }
    }

    pub fn dim(&self) -> usize {
        self.free_coordinates.len()
    }

    /// Coordinates of the class of `v` in the basis of free coordinates.
    pub fn quotient(&self, f: &Field, v: &[u32]) -> Vec<u32> {
        let r = self.relations.reduce(f, v);
        self.free_coordinates.iter().map(|&c| r[c]).collect()
    }
}

#[derive(Clone, Debug)]
pub struct TensorOverGroup {
    pub blocks: Vec<QuotientBlock>,
}

impl TensorOverGroup {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(QuotientBlock::dim).sum()
    }
}

/// Sorted orbit representatives of `V^{(x) n}` under position permutations,
/// with the adjacent transpositions fixing each.
fn tensor_power_orbits(n: usize, m: usize) -> Vec<(Vec<u8>, Vec<usize>)> {
    let mut out = Vec::new();
    let mut rep = vec![1u8; n];
    loop {
        let stab: Vec<usize> = (1..n).filter(|&i| rep[i - 1] == rep[i]).collect();
        out.push((rep.clone(), stab));
        // next non-decreasing sequence over 1..=m
        let Some(k) = (0..n).rev().find(|&k| (rep[k] as usize) < m) else { break };
        let v = rep[k] + 1;
        for x in rep.iter_mut().skip(k) {
            *x = v;
        }
    }
    out
}

/// `M (x)_{k(S_n)} W` for a right module `M` and a left module `W`.
pub fn tensor_over_group(module: &SigmaModule, w: LeftModule<'_>) -> Result<TensorOverGroup> {
    if module.side != Side::Right {
        return Err(Error::SideMismatch("the first factor must be a right module".into()));
    }
    let f = &module.field;
    let d = module.dim;
    match w {
        LeftModule::TensorPower { m } => {
            let mut blocks = Vec::new();
            for (rep, stab) in tensor_power_orbits(module.n, m) {
                let mut rows = Vec::new();
                for &i in &stab {
                    let a = &module.actions[i - 1];
                    for j in 0..d {
                        let mut col = a.column(j);
                        col[j] = f.sub_raw(col[j], 1);
                        rows.push(col);
                    }
                }
                blocks.push(QuotientBlock::new(Some(rep), Subspace::from_rows(f, d, &rows)));
            }
            Ok(TensorOverGroup { blocks })
        }
        LeftModule::Module(wm) => {
            if wm.side != Side::Left {
                return Err(Error::SideMismatch("the second factor must be a left module".into()));
            }
            if wm.n != module.n {
                return Err(Error::IndexMismatch(module.n, wm.n));
            }
            if wm.field != module.field {
                return Err(Error::FieldMismatch);
            }
            let dw = wm.dim;
            let mut rows = Vec::new();
            for (a, b) in module.actions.iter().zip(&wm.actions) {
                for i in 0..d {
                    for j in 0..dw {
                        // (e_i s) (x) e_j - e_i (x) (s e_j)
                        let mut v = vec![0u32; d * dw];
                        for r in 0..d {
                            let x = a.get(r, i);
                            if x != 0 {
                                v[r * dw + j] = f.add_raw(v[r * dw + j], x);
                            }
                        }
                        for r in 0..dw {
                            let x = b.get(r, j);
                            if x != 0 {
                                v[i * dw + r] = f.sub_raw(v[i * dw + r], x);
                            }
                        }
                        rows.push(v);
                    }
                }
            }
            Ok(TensorOverGroup { blocks: vec![QuotientBlock::new(None, Subspace::from_rows(f, d * dw, &rows))] })
        }
    }
}

/// Relations of `k(S_n) (x) W` as a subspace of ambient (multilinear) coordinates,
/// for a tensor-power block with stabilizer generators `stab`.
fn regular_relations(field: &FieldRef, n: usize, stab: &[usize]) -> Result<Subspace> {
    let g = sym_group(n)?;
    let order = g.order();
    let mut rows = Vec::new();
    for &i in stab {
        let s = Permutation::adjacent(n, i).rank();
        for r in 0..order {
            let mut v = vec![0u32; order];
            let t = g.product_rank(r, s);
            v[t] = 1;
            v[r] = field.sub_raw(v[r], 1);
            rows.push(v);
        }
    }
    Ok(Subspace::from_rows(field, order, &rows))
}

/// `dim ker(M (x) W -> k(S_n) (x) W)` for `M` embedded in `k(S_n)`,
/// i.e. `dim Tor_1(k(S_n)/M, W)`.
pub fn tor1_dim(module: &SigmaModule, w: LeftModule<'_>) -> Result<usize> {
    let amb = module.ambient.as_ref().ok_or(Error::NoAmbient)?;
    let f = &module.field;
    let n = module.n;
    let order = factorial(n);
    let tog = tensor_over_group(module, w)?;
    match w {
        LeftModule::TensorPower { m } => {
            let mut total = 0;
            for ((_, stab), block) in tensor_power_orbits(n, m).into_iter().zip(&tog.blocks) {
                let big = regular_relations(f, n, &stab)?;
                let m_span = Subspace::from_rows(f, order, amb);
                let inter = m_span.intersect(f, &big);
                total += inter.dim() - block.relations.dim();
            }
            Ok(total)
        }
        LeftModule::Module(wm) => {
            let regular = SigmaModule::regular(f, n, Side::Right)?;
            let big = tensor_over_group(&regular, LeftModule::Module(wm))?;
            let dw = wm.dim;
            let rows: Vec<Vec<u32>> = (0..module.dim)
                .flat_map(|i| {
                    (0..dw).map(move |j| {
                        let mut v = vec![0u32; order * dw];
                        for (r, &c) in amb[i].iter().enumerate() {
                            v[r * dw + j] = c;
                        }
                        v
                    })
                })
                .collect();
            let image = Subspace::from_rows(f, order * dw, &rows);
            let inter = image.intersect(f, &big.blocks[0].relations);
            Ok(inter.dim() - tog.blocks[0].relations.dim())
        }
    }
}

/// `Phi : M (x)_{k(S_n)} V^{(x) n} -> T_n(V)`, `alpha (x) w -> alpha . w`.
#[derive(Clone, Debug)]
pub struct PhiMap {
    /// Columns indexed by the quotient basis, block by block.
    pub matrix: Matrix,
    pub image: Subspace,
    pub source_dim: usize,
}

impl PhiMap {
    pub fn rank(&self) -> usize {
        self.image.dim()
    }
    pub fn is_injective(&self) -> bool {
        self.rank() == self.source_dim
    }
}

pub fn phi_map(module: &SigmaModule, m: usize) -> Result<PhiMap> {
    let amb = module.ambient.as_ref().ok_or(Error::NoAmbient)?;
    let f = &module.field;
    let n = module.n;
    let dim = tensor_dim(n, m).filter(|&d| d <= 1 << 20).ok_or_else(|| Error::CapExceeded("T_n(V)".into()))?;
    let tog = tensor_over_group(module, LeftModule::TensorPower { m })?;
    let mut cols = Vec::new();
    for block in &tog.blocks {
        let rep = block.representative.as_ref().expect("tensor-power block");
        let mut e = vec![0u32; dim];
        e[word_index(rep, m)] = 1;
        for &a in &block.free_coordinates {
            let alpha = GroupAlgebraElement::from_coords(f, n, amb[a].clone())?;
            cols.push(alpha.apply_dense(m, &e));
        }
    }
    let image = Subspace::from_rows(f, dim, &cols);
    Ok(PhiMap { matrix: Matrix::from_columns(dim, &cols), image, source_dim: tog.dim() })
}

/// Transposed actions; a right module becomes a left module and vice versa.
pub fn dual_module(module: &SigmaModule) -> Result<SigmaModule> {
    let f = &module.field;
    let actions = module
        .actions
        .iter()
        .map(|a| a.inverse(f).map(|inv| inv.transpose()).ok_or(Error::InvalidInput("singular action".into())))
        .collect::<Result<Vec<_>>>()?;
    SigmaModule::from_matrices(f, module.n, module.dim, module.side.opposite(), actions)
}

/// Basis of `Hom_{k(S_n)}(M, N)` as matrices `dim N x dim M`.
///
/// Spins a basis of `M` from module generators; a homomorphism is determined
/// by the images of the generators, and every relation met while spinning
/// becomes a linear condition on those images.
pub fn hom_basis(m: &SigmaModule, n: &SigmaModule) -> Result<Vec<Matrix>> {
    if m.n != n.n {
        return Err(Error::IndexMismatch(m.n, n.n));
    }
    if m.side != n.side {
        return Err(Error::SideMismatch("hom between a left and a right module".into()));
    }
    if m.field != n.field {
        return Err(Error::FieldMismatch);
    }
    let f = &m.field;
    let (dm, dn) = (m.dim, n.dim);
    if dm == 0 || dn == 0 {
        return Ok(Vec::new());
    }
    let gens = m.module_generators();
    let r = gens.len();
    let unknowns = r * dn;
    // tree vectors v_t with X v_t = W_t y_{j_t}
    let mut tree: Vec<(Vec<u32>, usize, Matrix)> = Vec::new();
    // echelon rows with their combinations of tree vectors
    let mut echelon: Vec<(Vec<u32>, usize, Vec<u32>)> = Vec::new();
    let mut equations = SpanBuilder::new(unknowns);

    let reduce = |echelon: &Vec<(Vec<u32>, usize, Vec<u32>)>, v: &[u32], ntree: usize| {
        let mut w = v.to_vec();
        let mut c = vec![0u32; ntree];
        for (rv, p, rc) in echelon {
            let coef = w[*p];
            if coef != 0 {
                f.axpy(&mut w, f.neg_raw(coef), rv);
                f.axpy(&mut c[..rc.len()], coef, rc);
            }
        }
        (w, c)
    };

    for (j, g) in gens.iter().enumerate() {
        let start = tree.len();
        let (w, c) = reduce(&echelon, g, tree.len());
        if w.iter().all(|&x| x == 0) {
            // generator already reached: X g = sum c_t W_t y_{j_t} must equal y_j
            add_relation(f, &mut equations, &tree, &c, j, &Matrix::identity(dn), dn);
            continue;
        }
        push_tree(f, &mut tree, &mut echelon, g.clone(), w, c, j, Matrix::identity(dn));
        let mut t = start;
        while t < tree.len() {
            for (s, a) in m.actions.iter().enumerate() {
                let v = a.mul_vec(f, &tree[t].0);
                let wt = n.actions[s].mul(f, &tree[t].2);
                let jt = tree[t].1;
                let (w, c) = reduce(&echelon, &v, tree.len());
                if w.iter().all(|&x| x == 0) {
                    add_relation(f, &mut equations, &tree, &c, jt, &wt, dn);
                } else {
                    push_tree(f, &mut tree, &mut echelon, v, w, c, jt, wt);
                }
            }
            t += 1;
        }
        if equations.dim() == unknowns {
            return Ok(Vec::new());
        }
    }
    debug_assert_eq!(tree.len(), dm);
    let eq = Matrix::from_rows(unknowns, equations.rows());
    let sols = eq.kernel(f);
    let vbasis = Matrix::from_columns(dm, &tree.iter().map(|t| t.0.clone()).collect::<Vec<_>>());
    let vinv = vbasis.inverse(f).expect("spun vectors form a basis");
    let mut out = Vec::with_capacity(sols.rows());
    for k in 0..sols.rows() {
        let y = sols.row(k);
        let cols: Vec<Vec<u32>> = tree.iter().map(|(_, j, w)| w.mul_vec(f, &y[j * dn..(j + 1) * dn])).collect();
        out.push(Matrix::from_columns(dn, &cols).mul(f, &vinv));
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn push_tree(
    f: &Field,
    tree: &mut Vec<(Vec<u32>, usize, Matrix)>,
    echelon: &mut Vec<(Vec<u32>, usize, Vec<u32>)>,
    v: Vec<u32>,
    mut w: Vec<u32>,
    c: Vec<u32>,
    j: usize,
    wmat: Matrix,
) {
    // w = v - sum c_t v_t  (c holds the coefficients subtracted)
    let idx = tree.len();
    let mut comb = vec![0u32; idx + 1];
    for (t, &x) in c.iter().enumerate() {
        comb[t] = f.neg_raw(x);
    }
    comb[idx] = 1;
    let p = w.iter().position(|&x| x != 0).expect("nonzero residual");
    let inv = f.inv_raw(w[p]);
    f.scale(&mut w, inv);
    f.scale(&mut comb, inv);
    // echelon rows store (row, pivot, combination such that row = sum comb_t v_t);
    // reduction accumulates +coef * comb, so v = sum c_t v_t when the residual vanishes
    echelon.push((w, p, comb));
    tree.push((v, j, wmat));
}

/// Adds `W y_j - sum_t c_t W_t y_{j_t} = 0`.
fn add_relation(
    f: &Field,
    equations: &mut SpanBuilder,
    tree: &[(Vec<u32>, usize, Matrix)],
    c: &[u32],
    j: usize,
    w: &Matrix,
    dn: usize,
) {
    let unknowns = equations.ambient();
    for row in 0..dn {
        let mut eq = vec![0u32; unknowns];
        eq[j * dn..(j + 1) * dn].copy_from_slice(w.row(row));
        for (t, &ct) in c.iter().enumerate() {
            if ct != 0 {
                let (_, jt, wt) = &tree[t];
                f.axpy(&mut eq[jt * dn..(jt + 1) * dn], f.neg_raw(ct), wt.row(row));
            }
        }
        equations.insert(f, &eq);
    }
}

pub fn hom_dim(m: &SigmaModule, n: &SigmaModule) -> Result<usize> {
    Ok(hom_basis(m, n)?.len())
}

pub fn is_equivariant(module: &SigmaModule, theta: &Matrix) -> bool {
    let f = &module.field;
    theta.rows() == module.dim
        && theta.cols() == module.dim
        && module.actions.iter().all(|a| theta.mul(f, a) == a.mul(f, theta))
}

/// `theta^k` with `k` the point where the rank sequence stabilizes.
fn stable_power(f: &Field, theta: &Matrix) -> (Matrix, usize) {
    let mut k = 1;
    let mut p = theta.clone();
    let mut rank = p.rank(f);
    loop {
        let next = p.mul(f, theta);
        let r = next.rank(f);
        if r == rank {
            return (p, k);
        }
        p = next;
        rank = r;
        k += 1;
    }
}

/// `M = Im(theta^k) + Ker(theta^k)` for the stable exponent `k`.
pub fn fitting_split(module: &SigmaModule, theta: &Matrix) -> Result<(SigmaModule, SigmaModule)> {
    if !is_equivariant(module, theta) {
        return Err(Error::NotEquivariant);
    }
    let f = &module.field;
    let (p, _) = stable_power(f, theta);
    let image = Subspace::from_rows(f, module.dim, &p.column_vecs());
    let kernel = p.kernel(f);
    Ok((module.submodule(&image.basis_vecs())?, module.submodule(&kernel.row_vecs())?))
}

/// Sylow p-subgroup generators of `S_n` from iterated wreath products over
/// the base-p digits of `n`.
pub fn sylow_generators(n: usize, p: usize) -> Vec<Permutation> {
    fn block(p: usize, k: u32, offset: usize, n: usize, out: &mut Vec<Permutation>) {
        if k == 0 {
            return;
        }
        block(p, k - 1, offset, n, out);
        let size = p.pow(k);
        let step = p.pow(k - 1);
        let mut images: Vec<usize> = (1..=n).collect();
        for x in 0..size {
            images[offset + x] = offset + (x + step) % size + 1;
        }
        out.push(Permutation::from_images(&images).expect("block shift"));
    }
    let mut out = Vec::new();
    let mut offset = 0;
    let mut rest = n;
    let mut k = 0u32;
    while rest > 0 {
        let digit = rest % p;
        for _ in 0..digit {
            block(p, k, offset, n, &mut out);
            offset += p.pow(k);
        }
        rest /= p;
        k += 1;
    }
    out
}

/// `p`-part of `n!`.
pub fn sylow_order(n: usize, p: usize) -> usize {
    let mut e = 0;
    let mut q = p;
    while q <= n {
        e += n / q;
        q *= p;
    }
    p.pow(e as u32)
}

/// Outcome of the split-section search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SectionOutcome {
    /// Functionals `phi_j` defining an equivariant section of the free cover.
    Split {
        generators: Vec<Vec<u32>>,
        functionals: Vec<Vec<u32>>,
    },
    NoSection,
    /// Not attempted: the linear system exceeds the work budget.
    Skipped {
        estimated_work: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectivityCertificate {
    pub sylow_order: usize,
    pub norm_rank: usize,
    pub dim: usize,
    pub section: SectionOutcome,
}

/// Work budget (field operations) for the section solve.
pub const SECTION_BUDGET: u64 = 400_000_000;

/// Projectivity by two criteria: freeness over a Sylow p-subgroup via the
/// rank of its norm element, and a split of the free cover.
pub fn is_projective(module: &SigmaModule) -> Result<(bool, ProjectivityCertificate)> {
    is_projective_with_budget(module, SECTION_BUDGET)
}

pub fn is_projective_with_budget(module: &SigmaModule, budget: u64) -> Result<(bool, ProjectivityCertificate)> {
    if module.dim > MAX_MODULE_DIM {
        return Err(Error::DimensionTooLarge { dim: module.dim, n: module.n });
    }
    let f = &module.field;
    let p = f.p() as usize;
    let n = module.n;
    let order = sylow_order(n, p);
    let elements = module.subgroup_matrices(&sylow_generators(n, p));
    debug_assert_eq!(elements.len(), order);
    let mut norm = Matrix::zeros(module.dim, module.dim);
    for (_, m) in &elements {
        norm = norm.add(f, m);
    }
    let norm_rank = norm.rank(f);
    let sylow_verdict = module.dim.is_multiple_of(order) && norm_rank * order == module.dim;
    let section = section_search(module, budget)?;
    let cert = ProjectivityCertificate { sylow_order: order, norm_rank, dim: module.dim, section };
    match (&cert.section, sylow_verdict) {
        (SectionOutcome::Split { .. }, false) | (SectionOutcome::NoSection, true) => {
            Err(Error::InvalidInput("projectivity criteria disagree; the module data is inconsistent".into()))
        }
        _ => Ok((sylow_verdict, cert)),
    }
}

/// Solves `sum_j sum_g g.u_j phi_j(g^{-1}. -) = id` for functionals `phi_j`.
fn section_search(module: &SigmaModule, budget: u64) -> Result<SectionOutcome> {
    let f = &module.field;
    let d = module.dim;
    if d == 0 {
        return Ok(SectionOutcome::Split { generators: Vec::new(), functionals: Vec::new() });
    }
    let gens = module.module_generators();
    let r = gens.len();
    let order = factorial(module.n);
    let work = (order as u64) * (d as u64).pow(3) * (r as u64 + 1);
    if work > budget {
        return Ok(SectionOutcome::Skipped { estimated_work: work });
    }
    let all: Vec<Permutation> = sym_group(module.n)?.perms().to_vec();
    let gens_adj: Vec<Permutation> = (1..module.n).map(|i| Permutation::adjacent(module.n, i)).collect();
    let mats: BTreeMap<Permutation, Matrix> = module.subgroup_matrices(&gens_adj).into_iter().collect();
    // equation (l, i) over unknown (j, k): sum_g (g.u_j)_l * rho(g^{-1})[k][i]
    let mut e = Matrix::zeros(d * d, r * d);
    for g in &all {
        let rg = &mats[g];
        let rinv = &mats[&g.inverse()];
        for (j, u) in gens.iter().enumerate() {
            let v = rg.mul_vec(f, u);
            for (l, &vl) in v.iter().enumerate() {
                if vl == 0 {
                    continue;
                }
                for k in 0..d {
                    let row = rinv.row(k);
                    for (i, &b) in row.iter().enumerate() {
                        if b != 0 {
                            let (rr, cc) = (l * d + i, j * d + k);
                            e.set(rr, cc, f.add_raw(e.get(rr, cc), f.mul_raw(vl, b)));
                        }
                    }
                }
            }
        }
    }
    let mut rhs = vec![0u32; d * d];
    for l in 0..d {
        rhs[l * d + l] = 1;
    }
    Ok(match e.solve(f, &rhs) {
        Some(x) => SectionOutcome::Split { generators: gens, functionals: x.chunks(d).map(|c| c.to_vec()).collect() },
        None => SectionOutcome::NoSection,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionOptions {
    pub seed: u64,
    /// Consecutive non-splitting random endomorphisms before a factor is accepted.
    pub budget: usize,
    /// Fail instead of accepting factors whose indecomposability is not certified.
    pub strict: bool,
}

impl Default for DecompositionOptions {
    fn default() -> Self {
        DecompositionOptions { seed: 0, budget: 64, strict: false }
    }
}

/// Largest endomorphism ring (number of elements) searched exhaustively.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 12;

#[derive(Clone, Debug)]
pub struct Summand {
    pub module: SigmaModule,
    /// Basis of the summand in the coordinates of the decomposed module.
    pub embedding: Vec<Vec<u32>>,
    /// Indecomposability proven (one-dimensional or exhaustively searched endomorphism ring).
    pub certified: bool,
}

/// Splits `module` with Fitting decompositions of random endomorphisms.
pub fn indecomposable_decomposition(module: &SigmaModule, opts: DecompositionOptions) -> Result<Vec<Summand>> {
    if module.dim > MAX_MODULE_DIM {
        return Err(Error::DimensionTooLarge { dim: module.dim, n: module.n });
    }
    let f = module.field.clone();
    let mut out = Vec::new();
    if module.dim == 0 {
        return Ok(out);
    }
    let identity: Vec<Vec<u32>> = (0..module.dim)
        .map(|i| {
            let mut e = vec![0u32; module.dim];
            e[i] = 1;
            e
        })
        .collect();
    let mut stack = vec![(module.clone(), identity, opts.seed)];
    while let Some((m, emb, seed)) = stack.pop() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let end = hom_basis(&m, &m)?;
        let q = f.order() as u64;
        let exhaustive =
            (end.len() as u32) < 64 && q.checked_pow(end.len() as u32).is_some_and(|c| c <= EXHAUSTIVE_LIMIT);
        let mut split = None;
        let certified;
        if end.len() <= 1 {
            certified = true;
        } else if exhaustive {
            certified = true;
            let total = q.pow(end.len() as u32);
            for code in 1..total {
                let theta = combination(&f, &end, code, q);
                if let Some(s) = try_split(&m, &theta)? {
                    split = Some(s);
                    break;
                }
            }
        } else {
            let mut failures = 0;
            while failures < opts.budget {
                let coeffs: Vec<u32> = (0..end.len()).map(|_| rng.gen_range(0..f.order())).collect();
                let mut theta = Matrix::zeros(m.dim, m.dim);
                for (b, &c) in end.iter().zip(&coeffs) {
                    theta = theta.add(&f, &b.scaled(&f, c));
                }
                if let Some(s) = try_split(&m, &theta)? {
                    split = Some(s);
                    break;
                }
                failures += 1;
            }
            certified = false;
            if split.is_none() && opts.strict {
                return Err(Error::TrialBudgetExhausted(opts.budget));
            }
        }
        match split {
            Some((im, ker)) => {
                let lift = |basis: &[Vec<u32>]| -> Vec<Vec<u32>> {
                    basis
                        .iter()
                        .map(|v| {
                            let mut out = vec![0u32; module.dim];
                            for (a, &c) in v.iter().enumerate() {
                                f.axpy(&mut out, c, &emb[a]);
                            }
                            out
                        })
                        .collect()
                };
                let (im_basis, ker_basis) = (im.clone(), ker.clone());
                let s1: u64 = rng.gen();
                let s2: u64 = rng.gen();
                // push kernel first so the image part is processed first
                stack.push((m.submodule(&ker_basis)?, lift(&ker_basis), s2));
                stack.push((m.submodule(&im_basis)?, lift(&im_basis), s1));
            }
            None => out.push(Summand { module: m, embedding: emb, certified }),
        }
    }
    Ok(out)
}

fn combination(f: &FieldRef, basis: &[Matrix], mut code: u64, q: u64) -> Matrix {
    let (r, c) = (basis[0].rows(), basis[0].cols());
    let mut theta = Matrix::zeros(r, c);
    for b in basis {
        let digit = (code % q) as u32;
        code /= q;
        if digit != 0 {
            theta = theta.add(f, &b.scaled(f, digit));
        }
    }
    theta
}

/// Bases of `Im(theta^k)` and `Ker(theta^k)` when both are nonzero.
fn try_split(m: &SigmaModule, theta: &Matrix) -> Result<Option<(Vec<Vec<u32>>, Vec<Vec<u32>>)>> {
    let f = &m.field;
    // theta^d has stable image and kernel
    let mut p = theta.clone();
    let mut e = 1;
    while e < m.dim {
        p = p.mul(f, &p);
        e *= 2;
    }
    let rank = p.rank(f);
    if rank == 0 || rank == m.dim {
        return Ok(None);
    }
    let image = Subspace::from_rows(f, m.dim, &p.column_vecs());
    Ok(Some((image.basis_vecs(), p.kernel(f).row_vecs())))
}

/// Isomorphism-invariant signature of a decomposition: sorted (dim, projective) pairs.
pub fn decomposition_signature(summands: &[Summand]) -> Result<Vec<(usize, bool)>> {
    let mut sig = summands
        .iter()
        .map(|s| Ok((s.module.dim, is_projective_with_budget(&s.module, 0)?.0)))
        .collect::<Result<Vec<_>>>()?;
    sig.sort();
    Ok(sig)
}

/// `(P, complement)`: the sum of projective indecomposable summands and the
/// sum of the others, both as submodules of `module`.
pub fn max_projective_summand(module: &SigmaModule, opts: DecompositionOptions) -> Result<(SigmaModule, SigmaModule)> {
    let parts = indecomposable_decomposition(module, opts)?;
    let mut proj = Vec::new();
    let mut rest = Vec::new();
    for s in parts {
        if is_projective_with_budget(&s.module, 0)?.0 {
            proj.extend(s.embedding);
        } else {
            rest.extend(s.embedding);
        }
    }
    Ok((module.submodule(&proj)?, module.submodule(&rest)?))
}

/// Draws a reproducible random vector.
pub fn random_vector(field: &Field, dim: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    (0..dim).map(|_| rng.gen_range(0..field.order())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::liealg::lie_module;

    #[test]
    fn regular_module_relations() {
        let f = make_field(3, 1).unwrap();
        for side in [Side::Left, Side::Right] {
            let m = SigmaModule::regular(&f, 4, side).unwrap();
            m.check_relations().unwrap();
            let g = Permutation::from_images(&[2, 4, 1, 3]).unwrap();
            let h = Permutation::from_images(&[3, 1, 4, 2]).unwrap();
            let prod = m.group_matrix(&g.star(&h));
            let expected = match side {
                Side::Right => m.group_matrix(&h).mul(&f, &m.group_matrix(&g)),
                Side::Left => m.group_matrix(&g).mul(&f, &m.group_matrix(&h)),
            };
            assert_eq!(prod, expected);
        }
    }

    #[test]
    fn sylow_orders() {
        for p in [2usize, 3, 5] {
            for n in 1..=7 {
                let f = make_field(p as u32, 1).unwrap();
                let m = SigmaModule::trivial(&f, n, Side::Right).unwrap();
                let elems = m.subgroup_matrices(&sylow_generators(n, p));
                assert_eq!(elems.len(), sylow_order(n, p), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn projectivity_examples() {
        let f2 = make_field(2, 1).unwrap();
        let f3 = make_field(3, 1).unwrap();
        assert!(is_projective(&SigmaModule::regular(&f2, 3, Side::Right).unwrap()).unwrap().0);
        assert!(!is_projective(&SigmaModule::trivial(&f2, 2, Side::Right).unwrap()).unwrap().0);
        assert!(is_projective(&lie_module(3, &f2).unwrap().0).unwrap().0);
        assert!(!is_projective(&lie_module(3, &f3).unwrap().0).unwrap().0);
        let (ok, cert) = is_projective(&lie_module(4, &f3).unwrap().0).unwrap();
        assert!(matches!(cert.section, SectionOutcome::Split { .. }) == ok);
    }

    #[test]
    fn hom_dims() {
        let f = make_field(2, 1).unwrap();
        let reg = SigmaModule::regular(&f, 3, Side::Right).unwrap();
        let (lie3, _) = lie_module(3, &f).unwrap();
        assert_eq!(hom_dim(&reg, &lie3).unwrap(), 2);
        assert_eq!(hom_dim(&reg, &reg).unwrap(), 6);
        let triv = SigmaModule::trivial(&f, 3, Side::Right).unwrap();
        assert_eq!(hom_dim(&reg, &triv).unwrap(), 1);
        assert_eq!(hom_dim(&triv, &reg).unwrap(), 1);
    }

    #[test]
    fn hom_matches_commutant_brute_force() {
        let f = make_field(3, 1).unwrap();
        let (lie4, _) = lie_module(4, &f).unwrap();
        let reg = SigmaModule::regular(&f, 3, Side::Right).unwrap();
        for m in [&lie4, &reg] {
            let basis = hom_basis(m, m).unwrap();
            for x in &basis {
                assert!(is_equivariant(m, x));
            }
            // independent solve of X A = A X via Kronecker products
            let d = m.dim();
            let mut rows = Vec::new();
            for a in m.actions() {
                for i in 0..d {
                    for j in 0..d {
                        let mut eq = vec![0u32; d * d];
                        for k in 0..d {
                            // (XA)_{ij} = sum_k X_ik A_kj ; (AX)_{ij} = sum_k A_ik X_kj
                            eq[i * d + k] = f.add_raw(eq[i * d + k], a.get(k, j));
                            eq[k * d + j] = f.sub_raw(eq[k * d + j], a.get(i, k));
                        }
                        rows.push(eq);
                    }
                }
            }
            let sys = Matrix::from_rows(d * d, &rows);
            assert_eq!(basis.len(), d * d - sys.rank(&f));
        }
    }

    #[test]
    fn decomposition_of_regular_s2() {
        let f2 = make_field(2, 1).unwrap();
        let f3 = make_field(3, 1).unwrap();
        let opts = DecompositionOptions::default();
        let d2 = indecomposable_decomposition(&SigmaModule::regular(&f2, 2, Side::Right).unwrap(), opts).unwrap();
        assert_eq!(d2.len(), 1);
        assert!(d2[0].certified);
        let d3 = indecomposable_decomposition(&SigmaModule::regular(&f3, 2, Side::Right).unwrap(), opts).unwrap();
        assert_eq!(d3.iter().map(|s| s.module.dim()).collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn fitting_split_trivial_cases() {
        let f = make_field(3, 1).unwrap();
        let m = SigmaModule::regular(&f, 3, Side::Right).unwrap();
        let (im, ker) = fitting_split(&m, &Matrix::identity(6)).unwrap();
        assert_eq!((im.dim(), ker.dim()), (6, 0));
        let (im, ker) = fitting_split(&m, &Matrix::zeros(6, 6)).unwrap();
        assert_eq!((im.dim(), ker.dim()), (0, 6));
        let mut bad = Matrix::zeros(6, 6);
        bad.set(0, 1, 1);
        assert!(matches!(fitting_split(&m, &bad), Err(Error::NotEquivariant)));
    }

    #[test]
    fn face_maps() {
        assert_eq!(face_map_word(1, &[1]), None);
        assert_eq!(face_map_word(1, &[2]), Some(vec![1]));
        assert_eq!(face_map_word(2, &[1, 3]), Some(vec![1, 2]));
        assert_eq!(face_map_word(2, &[]), Some(vec![]));
        assert!(face_map(0, 3, 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = make_field(3, 1).unwrap();
        let (m, _) = lie_module(3, &f).unwrap();
        assert_eq!(SigmaModule::from_json(&m.to_json()).unwrap(), m);
    }
}
