//! Root data, Chevalley bases and the automorphism tau.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::lattice::{Weight, MAX_RANK};

/// A basis element of the Lie algebra: a root vector or a toral basis vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Basis {
    E(usize),
    H(usize),
}

/// Integer linear combination of basis elements.
pub type LinComb = Vec<(Basis, i64)>;

/// How the datum was produced; enough to rebuild it.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum DatumKind {
    Gl(usize),
    Cartan(String),
}

/// Root system with a Chevalley basis and the prime `p`.
///
/// Roots are indexed `0..2r`: index `k < r` is the positive root `beta_{k+1}`
/// in (height, then descending simple coefficients) order, and `r + k` is its
/// negative. Simple root `alpha_{i+1}` has index `i`.
#[derive(Clone, Debug)]
pub struct ChevalleyDatum {
    pub kind: DatumKind,
    pub p: u32,
    /// rank of X, equal to the number of toral basis vectors
    pub d: usize,
    /// number of simple roots
    pub n: usize,
    pub cartan: Vec<Vec<i32>>,
    roots: Vec<Weight>,
    coeffs: Vec<Vec<i32>>,
    coroots: Vec<Vec<i32>>,
    norms: Vec<i64>,
    sc: Vec<Vec<i32>>,
    sum: Vec<Vec<Option<usize>>>,
    index: HashMap<Weight, usize>,
    rho: Weight,
}

impl PartialEq for ChevalleyDatum {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.p == other.p
    }
}
impl Eq for ChevalleyDatum {}

impl ChevalleyDatum {
    pub fn name(&self) -> String {
        match &self.kind {
            DatumKind::Gl(n) => format!("gl{n}"),
            DatumKind::Cartan(t) => t.clone(),
        }
    }

    /// Number of positive roots.
    pub fn num_pos(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn dim_g(&self) -> usize {
        self.roots.len() + self.d
    }

    pub fn root(&self, i: usize) -> Weight {
        self.roots[i]
    }

    pub fn roots(&self) -> &[Weight] {
        &self.roots
    }

    pub fn neg(&self, i: usize) -> usize {
        let r = self.num_pos();
        if i < r {
            i + r
        } else {
            i - r
        }
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.num_pos()
    }

    pub fn simple(&self, i: usize) -> Weight {
        self.roots[i]
    }

    /// Coefficients of root `i` in the simple roots.
    pub fn coeffs(&self, i: usize) -> &[i32] {
        &self.coeffs[i]
    }

    pub fn height(&self, i: usize) -> i32 {
        self.coeffs[i].iter().sum()
    }

    /// Coordinates of `h_alpha` in the toral basis.
    pub fn coroot(&self, i: usize) -> &[i32] {
        &self.coroots[i]
    }

    /// Squared length of root `i` under the invariant form.
    pub fn norm(&self, i: usize) -> i64 {
        self.norms[i]
    }

    /// `<lambda, alpha_i^vee>` for root index `i`.
    pub fn pairing(&self, lambda: &Weight, i: usize) -> i64 {
        lambda.dot(&self.coroots[i])
    }

    pub fn root_index(&self, w: &Weight) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn sum_root(&self, a: usize, b: usize) -> Option<usize> {
        self.sum[a][b]
    }

    /// `N_{a,b}`, zero when `a + b` is not a root.
    pub fn n_const(&self, a: usize, b: usize) -> i32 {
        self.sc[a][b]
    }

    pub fn rho(&self) -> Weight {
        self.rho
    }

    /// `s_alpha(lambda) = lambda - <lambda, alpha^vee> alpha`
    pub fn reflect(&self, lambda: &Weight, i: usize) -> Weight {
        let k = self.pairing(lambda, i) as i32;
        *lambda - k * self.roots[i]
    }

    /// Integer coefficients of `v` in the simple roots, if `v` lies in the
    /// root lattice.
    pub fn simple_coords(&self, v: &Weight) -> Option<Vec<i64>> {
        let (d, n) = (self.d, self.n);
        // augmented d x (n+1) system over Q
        let mut m: Vec<Vec<Frac>> = (0..d)
            .map(|i| {
                let mut row: Vec<Frac> = (0..n).map(|j| Frac::new(self.roots[j].coords()[i] as i64, 1)).collect();
                row.push(Frac::new(v.coords()[i] as i64, 1));
                row
            })
            .collect();
        let mut r = 0;
        let mut pivots = Vec::new();
        for c in 0..n {
            let Some(pr) = (r..d).find(|&i| m[i][c].0 != 0) else { continue };
            m.swap(r, pr);
            let inv = Frac::new(m[r][c].1, m[r][c].0);
            for x in m[r].iter_mut() {
                *x = x.mul(inv);
            }
            for i in 0..d {
                if i != r && m[i][c].0 != 0 {
                    let f = m[i][c];
                    for j in 0..=n {
                        let t = m[r][j].mul(f);
                        m[i][j] = m[i][j].add(Frac::new(-t.0, t.1));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        if (r..d).any(|i| m[i][n].0 != 0) {
            return None;
        }
        let mut out = vec![0i64; n];
        for (k, &c) in pivots.iter().enumerate() {
            out[c] = m[k][n].int()?;
        }
        Some(out)
    }

    /// Position of a basis element in the ordering `E(0..2r), H(0..d)`.
    pub fn basis_pos(&self, b: Basis) -> usize {
        match b {
            Basis::E(i) => i,
            Basis::H(j) => self.roots.len() + j,
        }
    }

    pub fn basis_at(&self, pos: usize) -> Basis {
        if pos < self.roots.len() {
            Basis::E(pos)
        } else {
            Basis::H(pos - self.roots.len())
        }
    }

    pub fn bracket(&self, x: Basis, y: Basis) -> LinComb {
        match (x, y) {
            (Basis::H(_), Basis::H(_)) => Vec::new(),
            (Basis::H(i), Basis::E(b)) => {
                let c = self.roots[b].coords()[i] as i64;
                if c == 0 {
                    Vec::new()
                } else {
                    vec![(Basis::E(b), c)]
                }
            }
            (Basis::E(_), Basis::H(_)) => self.bracket(y, x).into_iter().map(|(b, c)| (b, -c)).collect(),
            (Basis::E(a), Basis::E(b)) => {
                if b == self.neg(a) {
                    self.coroots[a]
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(j, &c)| (Basis::H(j), c as i64))
                        .collect()
                } else if let Some(s) = self.sum[a][b] {
                    vec![(Basis::E(s), self.sc[a][b] as i64)]
                } else {
                    Vec::new()
                }
            }
        }
    }

    /// Bracket of basis elements as a dense integer vector.
    fn bracket_vec(&self, x: usize, y: usize) -> Vec<i64> {
        let mut v = vec![0i64; self.dim_g()];
        for (b, c) in self.bracket(self.basis_at(x), self.basis_at(y)) {
            v[self.basis_pos(b)] += c;
        }
        v
    }

    /// Bracket of two dense vectors, reduced mod `m` when `m > 0`.
    pub fn bracket_dense(&self, x: &[i64], y: &[i64], m: i64) -> Vec<i64> {
        let n = self.dim_g();
        let mut out = vec![0i64; n];
        for i in (0..n).filter(|&i| x[i] != 0) {
            for j in (0..n).filter(|&j| y[j] != 0) {
                for (b, c) in self.bracket(self.basis_at(i), self.basis_at(j)) {
                    out[self.basis_pos(b)] += x[i] * y[j] * c;
                }
            }
        }
        if m > 0 {
            for v in out.iter_mut() {
                *v = v.rem_euclid(m);
            }
        }
        out
    }

    /// Matrix of `ad x` on the basis, columns indexed by basis position.
    pub fn ad_matrix(&self, x: usize) -> Vec<Vec<i64>> {
        let n = self.dim_g();
        let mut m = vec![vec![0i64; n]; n];
        for j in 0..n {
            let col = self.bracket_vec(x, j);
            for i in 0..n {
                m[i][j] = col[i];
            }
        }
        m
    }

    fn verify(&self) -> Result<()> {
        let n = self.dim_g();
        let fail = |m: String| Err(Error::DatumCheckFailed(m));
        // antisymmetry and vanishing outside R
        for a in 0..self.num_roots() {
            for b in 0..self.num_roots() {
                if self.sum[a][b].is_none() && self.sc[a][b] != 0 {
                    return fail(format!("N_{{{a},{b}}} nonzero without root sum"));
                }
                if self.sc[a][b] != -self.sc[b][a] {
                    return fail(format!("N not antisymmetric at {a},{b}"));
                }
            }
        }
        // Jacobi over Z
        let table: Vec<Vec<Vec<i64>>> = (0..n).map(|i| (0..n).map(|j| self.bracket_vec(i, j)).collect()).collect();
        let br = |v: &[i64], z: usize| -> Vec<i64> {
            let mut out = vec![0i64; n];
            for (k, &c) in v.iter().enumerate() {
                if c != 0 {
                    for (o, t) in out.iter_mut().zip(&table[k][z]) {
                        *o += c * t;
                    }
                }
            }
            out
        };
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    // [[x,y],z] + [[y,z],x] + [[z,x],y]
                    let a = br(&table[x][y], z);
                    let b = br(&table[y][z], x);
                    let c = br(&table[z][x], y);
                    if (0..n).any(|i| a[i] + b[i] + c[i] != 0) {
                        return fail(format!("Jacobi fails on basis triple ({x},{y},{z})"));
                    }
                }
            }
        }
        // pairing against h_alpha matches the bracket [h_alpha, e_beta]
        for a in 0..self.num_roots() {
            let h: Vec<i64> = {
                let mut v = vec![0i64; n];
                for (j, &c) in self.coroots[a].iter().enumerate() {
                    v[self.roots.len() + j] = c as i64;
                }
                v
            };
            for b in 0..self.num_roots() {
                let mut eb = vec![0i64; n];
                eb[b] = 1;
                let r = self.bracket_dense(&h, &eb, 0);
                if r[b] != self.pairing(&self.roots[b], a) {
                    return fail(format!("<beta, alpha^vee> mismatch at {a},{b}"));
                }
            }
        }
        // [p]-structure: (ad e)^p = 0 and (ad h_i)^p = ad h_i mod p
        let p = self.p as i64;
        for x in 0..n {
            let ad = self.ad_matrix(x);
            let pw = mat_pow_mod(&ad, self.p as u64, p);
            let target = if x < self.roots.len() { vec![vec![0; n]; n] } else { mat_mod(&ad, p) };
            if pw != target {
                return fail(format!("[p]-map check fails on basis element {x}"));
            }
        }
        Ok(())
    }

    /// JSON-friendly description.
    pub fn dump(&self) -> DatumDump {
        let mut sc = Vec::new();
        for a in 0..self.num_roots() {
            for b in 0..self.num_roots() {
                if self.sc[a][b] != 0 {
                    sc.push((a, b, self.sc[a][b]));
                }
            }
        }
        DatumDump {
            name: self.name(),
            p: self.p,
            rank: self.d,
            semisimple_rank: self.n,
            positive_roots: self.roots[..self.num_pos()].to_vec(),
            simple_coefficients: self.coeffs[..self.num_pos()].to_vec(),
            coroots: self.coroots[..self.num_pos()].to_vec(),
            structure_constants: sc,
            rho: self.rho,
            sign_convention: match self.kind {
                DatumKind::Gl(_) => "matrix units".into(),
                DatumKind::Cartan(_) => "extraspecial pairs positive".into(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumDump {
    pub name: String,
    pub p: u32,
    pub rank: usize,
    pub semisimple_rank: usize,
    pub positive_roots: Vec<Weight>,
    pub simple_coefficients: Vec<Vec<i32>>,
    pub coroots: Vec<Vec<i32>>,
    /// triples `(a, b, N_{a,b})` over root indices
    pub structure_constants: Vec<(usize, usize, i32)>,
    pub rho: Weight,
    pub sign_convention: String,
}

fn mat_mod(a: &[Vec<i64>], m: i64) -> Vec<Vec<i64>> {
    a.iter().map(|r| r.iter().map(|x| x.rem_euclid(m)).collect()).collect()
}

fn mat_mul_mod(a: &[Vec<i64>], b: &[Vec<i64>], m: i64) -> Vec<Vec<i64>> {
    let n = a.len();
    let k = b.len();
    let c = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0i64; c]; n];
    for i in 0..n {
        for l in 0..k {
            let x = a[i][l];
            if x == 0 {
                continue;
            }
            for j in 0..c {
                out[i][j] = (out[i][j] + x * b[l][j]).rem_euclid(m);
            }
        }
    }
    out
}

fn mat_pow_mod(a: &[Vec<i64>], mut e: u64, m: i64) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut acc: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    let mut base = mat_mod(a, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul_mod(&acc, &base, m);
        }
        base = mat_mul_mod(&base, &base, m);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: i64, m: i64) -> Option<i64> {
    let a = a.rem_euclid(m);
    if a == 0 {
        return None;
    }
    let (mut t, mut nt, mut r, mut nr) = (0i64, 1i64, m, a);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    (r == 1).then(|| t.rem_euclid(m))
}

fn mat_inv_mod(a: &[Vec<i64>], m: i64) -> Option<Vec<Vec<i64>>> {
    let n = a.len();
    let mut aug: Vec<Vec<i64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<i64> = r.iter().map(|x| x.rem_euclid(m)).collect();
            row.extend((0..n).map(|j| (i == j) as i64));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| aug[i][c] != 0)?;
        aug.swap(c, p);
        let inv = inv_mod(aug[c][c], m)?;
        for x in aug[c].iter_mut() {
            *x = (*x * inv).rem_euclid(m);
        }
        for i in 0..n {
            if i != c && aug[i][c] != 0 {
                let f = aug[i][c];
                for j in 0..2 * n {
                    aug[i][j] = (aug[i][j] - f * aug[c][j]).rem_euclid(m);
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

struct Assembly {
    kind: DatumKind,
    p: u32,
    d: usize,
    cartan: Vec<Vec<i32>>,
    /// positive roots: X-coordinates, simple coefficients, coroot coordinates, norm
    pos: Vec<(Weight, Vec<i32>, Vec<i32>, i64)>,
    /// structure constants on positive-or-negative pairs, keyed by root weights
    n_of: Box<dyn Fn(&Weight, &Weight) -> i32>,
    rho: Weight,
}

fn assemble(a: Assembly) -> Result<ChevalleyDatum> {
    let mut pos = a.pos;
    pos.sort_by(|x, y| {
        let hx: i32 = x.1.iter().sum();
        let hy: i32 = y.1.iter().sum();
        hx.cmp(&hy).then_with(|| y.1.cmp(&x.1))
    });
    let r = pos.len();
    let mut roots = Vec::with_capacity(2 * r);
    let mut coeffs = Vec::with_capacity(2 * r);
    let mut coroots = Vec::with_capacity(2 * r);
    let mut norms = Vec::with_capacity(2 * r);
    for (w, c, h, nm) in &pos {
        roots.push(*w);
        coeffs.push(c.clone());
        coroots.push(h.clone());
        norms.push(*nm);
    }
    for (w, c, h, nm) in &pos {
        roots.push(-*w);
        coeffs.push(c.iter().map(|x| -x).collect());
        coroots.push(h.iter().map(|x| -x).collect());
        norms.push(*nm);
    }
    let index: HashMap<Weight, usize> = roots.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let mut sum = vec![vec![None; 2 * r]; 2 * r];
    let mut sc = vec![vec![0i32; 2 * r]; 2 * r];
    for x in 0..2 * r {
        for y in 0..2 * r {
            if let Some(&s) = index.get(&(roots[x] + roots[y])) {
                sum[x][y] = Some(s);
                sc[x][y] = (a.n_of)(&roots[x], &roots[y]);
            }
        }
    }
    let datum = ChevalleyDatum {
        kind: a.kind,
        p: a.p,
        d: a.d,
        n: a.cartan.len(),
        cartan: a.cartan,
        roots,
        coeffs,
        coroots,
        norms,
        sc,
        sum,
        index,
        rho: a.rho,
    };
    for i in 0..datum.n {
        if datum.pairing(&datum.rho, i) != 1 {
            return Err(Error::NoIntegralRho);
        }
    }
    datum.verify()?;
    Ok(datum)
}

/// `gl_n` with matrix-unit root vectors.
pub fn build_gl(n: usize, p: u32) -> Result<ChevalleyDatum> {
    if !(2..=MAX_RANK).contains(&n) {
        return Err(Error::UnsupportedType(format!("gl{n}: need 2 <= n <= {MAX_RANK}")));
    }
    if p == 2 {
        return Err(Error::BadPrime { p, reason: "p = 2 is excluded".into() });
    }
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let eps = |i: usize| Weight::unit(n, i);
    let mut pos = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let w = eps(i) - eps(j);
            let mut c = vec![0; n - 1];
            for k in i..j {
                c[k] = 1;
            }
            pos.push((w, c, w.coords().to_vec(), 2));
        }
    }
    let cartan: Vec<Vec<i32>> = (0..n - 1)
        .map(|i| (0..n - 1).map(|j| if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 }).collect())
        .collect();
    // e_{eps_i - eps_j} = E_ij;  [E_ij, E_kl] = d_jk E_il - d_li E_kj
    let ends = move |w: &Weight| -> (usize, usize) {
        let c = w.coords();
        (c.iter().position(|&x| x == 1).unwrap(), c.iter().position(|&x| x == -1).unwrap())
    };
    let n_of = Box::new(move |x: &Weight, y: &Weight| -> i32 {
        let (i, j) = ends(x);
        let (k, l) = ends(y);
        if j == k {
            1
        } else if l == i {
            -1
        } else {
            0
        }
    });
    let rho = Weight::new(&(0..n).map(|i| (n - 1 - i) as i32).collect::<Vec<_>>());
    assemble(Assembly { kind: DatumKind::Gl(n), p, d: n, cartan, pos, n_of, rho })
}

/// Gram matrix of the simple roots for a named type.
fn gram_of_type(t: &str) -> Result<Vec<Vec<i64>>> {
    let bad = || Error::UnsupportedType(t.to_string());
    let (letter, rank) = t.split_at(1);
    let n: usize = rank.parse().map_err(|_| bad())?;
    if n == 0 || n > MAX_RANK {
        return Err(bad());
    }
    let mut g = vec![vec![0i64; n]; n];
    match letter {
        "A" => {
            for i in 0..n {
                g[i][i] = 2;
                if i + 1 < n {
                    g[i][i + 1] = -1;
                    g[i + 1][i] = -1;
                }
            }
        }
        "B" if n >= 2 => {
            for i in 0..n {
                g[i][i] = if i + 1 == n { 2 } else { 4 };
                if i + 1 < n {
                    g[i][i + 1] = -2;
                    g[i + 1][i] = -2;
                }
            }
        }
        "C" if n >= 2 => {
            for i in 0..n {
                g[i][i] = if i + 1 == n { 4 } else { 2 };
                if i + 1 < n {
                    let v = if i + 2 == n { -2 } else { -1 };
                    g[i][i + 1] = v;
                    g[i + 1][i] = v;
                }
            }
        }
        "D" if n >= 3 => {
            for i in 0..n {
                g[i][i] = 2;
            }
            for i in 0..n - 2 {
                g[i][i + 1] = -1;
                g[i + 1][i] = -1;
            }
            g[n - 3][n - 1] = -1;
            g[n - 1][n - 3] = -1;
        }
        "G" if n == 2 => {
            g = vec![vec![2, -3], vec![-3, 6]];
        }
        _ => return Err(bad()),
    }
    Ok(g)
}

/// Cartan matrix `a_ij = <alpha_i, alpha_j^vee>` of a named type.
pub fn cartan_of_type(t: &str) -> Result<Vec<Vec<i32>>> {
    let g = gram_of_type(t)?;
    let n = g.len();
    Ok((0..n).map(|i| (0..n).map(|j| (2 * g[i][j] / g[j][j]) as i32).collect()).collect())
}

/// Recovers a symmetrising Gram matrix from a Cartan matrix, checking that it
/// is connected and of finite type.
fn gram_from_cartan(a: &[Vec<i32>]) -> Result<Vec<Vec<i64>>> {
    let n = a.len();
    let bad = |m: &str| Error::UnsupportedType(m.to_string());
    if n == 0 || n > MAX_RANK || a.iter().any(|r| r.len() != n) {
        return Err(bad("cartan matrix must be square of rank 1..4"));
    }
    for i in 0..n {
        if a[i][i] != 2 {
            return Err(bad("diagonal entries must be 2"));
        }
        for j in 0..n {
            if i != j && (a[i][j] > 0 || (a[i][j] == 0) != (a[j][i] == 0)) {
                return Err(bad("not a generalised cartan matrix"));
            }
        }
    }
    // (alpha_i, alpha_i) ratios from a_ij / a_ji = |alpha_i|^2 / |alpha_j|^2
    let mut len: Vec<Option<(i64, i64)>> = vec![None; n];
    len[0] = Some((1, 1));
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        let (num, den) = len[i].unwrap();
        for j in 0..n {
            if j != i && a[i][j] != 0 && len[j].is_none() {
                len[j] = Some((num * a[j][i] as i64, den * a[i][j] as i64));
                stack.push(j);
            }
        }
    }
    if len.iter().any(|l| l.is_none()) {
        return Err(bad("cartan matrix is not connected"));
    }
    let l: Vec<(i64, i64)> = len.into_iter().map(|x| x.unwrap()).collect();
    let lcm_den = l.iter().fold(1i64, |acc, &(_, d)| lcm(acc, d.abs()));
    let mut norms: Vec<i64> = l.iter().map(|&(nu, de)| nu * (lcm_den / de)).collect();
    let g0 = norms.iter().fold(0i64, |acc, &x| gcd(acc, x.abs()));
    for x in norms.iter_mut() {
        *x = 2 * x.abs() / g0;
    }
    let g: Vec<Vec<i64>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { norms[i] } else { a[i][j] as i64 * norms[j] / 2 }).collect()).collect();
    for i in 0..n {
        for j in 0..n {
            if g[i][j] != g[j][i] || (i != j && 2 * g[i][j] != a[i][j] as i64 * norms[j]) {
                return Err(bad("cartan matrix is not symmetrisable"));
            }
        }
    }
    // positive definiteness through leading minors
    for k in 1..=n {
        if det(&g[..k].iter().map(|r| r[..k].to_vec()).collect::<Vec<_>>()) <= 0 {
            return Err(bad("cartan matrix is not of finite type"));
        }
    }
    Ok(g)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

/// Fraction-free determinant.
fn det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Frac(i64, i64);

impl Frac {
    fn new(n: i64, d: i64) -> Frac {
        assert!(d != 0);
        let g = gcd(n, d).max(1);
        let s = if d < 0 { -1 } else { 1 };
        Frac(s * n / g, s * d / g)
    }
    fn int(self) -> Option<i64> {
        (self.1 == 1).then_some(self.0)
    }
    fn add(self, o: Frac) -> Frac {
        Frac::new(self.0 * o.1 + o.0 * self.1, self.1 * o.1)
    }
    fn mul(self, o: Frac) -> Frac {
        Frac::new(self.0 * o.0, self.1 * o.1)
    }
}

/// Classifies a connected finite-type Gram matrix by root counts and lengths.
fn classify(n: usize, npos: usize, norms: &[i64]) -> (char, usize) {
    let max = *norms.iter().max().unwrap();
    let min = *norms.iter().min().unwrap();
    if max == min {
        if npos == n * (n + 1) / 2 {
            ('A', n)
        } else {
            ('D', n)
        }
    } else if max == 3 * min {
        ('G', n)
    } else if npos == 24 {
        ('F', n)
    } else {
        let long = norms.iter().filter(|&&x| x == max).count();
        // long positive roots: B_n has n(n-1), C_n has n
        if long == n && n != 2 {
            ('C', n)
        } else if long == n * (n - 1) && n != 2 {
            ('B', n)
        } else {
            ('B', n)
        }
    }
}

/// Datum from a Cartan matrix of finite type, in fundamental-weight
/// coordinates, with structure constants fixed by extraspecial pairs.
pub fn build_from_cartan(cartan: &[Vec<i32>], p: u32) -> Result<ChevalleyDatum> {
    let g = gram_from_cartan(cartan)?;
    let n = g.len();
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let form = |x: &[i32], y: &[i32]| -> i64 {
        let mut s = 0;
        for i in 0..n {
            for j in 0..n {
                s += x[i] as i64 * y[j] as i64 * g[i][j];
            }
        }
        s
    };
    // positive roots by the string algorithm
    let mut pos: Vec<Vec<i32>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i32).collect()).collect();
    let mut known: std::collections::HashSet<Vec<i32>> = pos.iter().cloned().collect();
    let mut frontier = pos.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for b in &frontier {
            for i in 0..n {
                let mut q = 0;
                loop {
                    let mut c = b.clone();
                    c[i] -= q + 1;
                    if known.contains(&c) {
                        q += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = (0..n).map(|j| b[j] as i64 * cartan[j][i] as i64).sum();
                if q as i64 - pairing > 0 {
                    let mut c = b.clone();
                    c[i] += 1;
                    if known.insert(c.clone()) {
                        next.push(c);
                    }
                }
            }
        }
        pos.extend(next.iter().cloned());
        frontier = next;
    }
    let norms: Vec<i64> = pos.iter().map(|c| form(c, c)).collect();
    let (letter, rank) = classify(n, pos.len(), &norms);
    let name = format!("{letter}{rank}");
    match letter {
        'F' => return Err(Error::UnsupportedType(name)),
        'A' => {
            if p == 2 || (rank as u32 + 1) % p == 0 {
                return Err(Error::BadPrime { p, reason: format!("{name} needs p odd and p not dividing {}", rank + 1) });
            }
        }
        'G' => {
            if p <= 3 {
                return Err(Error::BadPrime { p, reason: "G2 needs p > 3".into() });
            }
        }
        _ => {
            if p == 2 {
                return Err(Error::BadPrime { p, reason: format!("{name} needs p > 2") });
            }
        }
    }
    let to_x = |c: &[i32]| -> Weight {
        Weight::new(&(0..n).map(|j| (0..n).map(|i| c[i] * cartan[i][j]).sum::<i32>()).collect::<Vec<_>>())
    };
    let coroot = |c: &[i32]| -> Vec<i32> {
        let nb = form(c, c);
        (0..n).map(|i| (c[i] as i64 * g[i][i] / nb) as i32).collect()
    };
    // order used by the extraspecial-pair algorithm: height, then descending coefficients
    pos.sort_by(|x, y| {
        let hx: i32 = x.iter().sum();
        let hy: i32 = y.iter().sum();
        hx.cmp(&hy).then_with(|| y.cmp(x))
    });
    let order: HashMap<Vec<i32>, usize> = pos.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let is_root = |c: &[i32]| -> bool {
        let neg: Vec<i32> = c.iter().map(|x| -x).collect();
        order.contains_key(c) || order.contains_key(&neg)
    };
    let sign = |c: &[i32]| -> i32 { if c.iter().any(|&x| x > 0) { 1 } else { -1 } };
    let add = |x: &[i32], y: &[i32]| -> Vec<i32> { x.iter().zip(y).map(|(a, b)| a + b).collect() };
    let negv = |x: &[i32]| -> Vec<i32> { x.iter().map(|a| -a).collect() };

    let mut npos: HashMap<(Vec<i32>, Vec<i32>), i64> = HashMap::new();

    fn lookup(
        x: &[i32],
        y: &[i32],
        npos: &HashMap<(Vec<i32>, Vec<i32>), i64>,
        form: &dyn Fn(&[i32], &[i32]) -> i64,
        sign: &dyn Fn(&[i32]) -> i32,
    ) -> Frac {
        let s = sign(x);
        let t = sign(y);
        if s > 0 && t > 0 {
            return Frac::new(*npos.get(&(x.to_vec(), y.to_vec())).expect("structure constant not yet known"), 1);
        }
        if s < 0 && t < 0 {
            let nx: Vec<i32> = x.iter().map(|a| -a).collect();
            let ny: Vec<i32> = y.iter().map(|a| -a).collect();
            let v = lookup(&nx, &ny, npos, form, sign);
            return Frac::new(-v.0, v.1);
        }
        // x + y + z = 0 with z = -(x+y): N_{x,y}/(z,z) = N_{y,z}/(x,x) = N_{z,x}/(y,y)
        let z: Vec<i32> = x.iter().zip(y).map(|(a, b)| -(a + b)).collect();
        let zz = form(&z, &z);
        if sign(&z) == s {
            let v = lookup(&z, x, npos, form, sign);
            v.mul(Frac::new(zz, form(y, y)))
        } else {
            let v = lookup(y, &z, npos, form, sign);
            v.mul(Frac::new(zz, form(x, x)))
        }
    }

    for eta in pos.iter().filter(|c| c.iter().sum::<i32>() >= 2) {
        let alpha = pos.iter().find(|a| order.contains_key(&eta.iter().zip(a.iter()).map(|(e, x)| e - x).collect::<Vec<_>>())).unwrap().clone();
        let beta: Vec<i32> = eta.iter().zip(&alpha).map(|(e, a)| e - a).collect();
        let mut r = 0;
        loop {
            let c: Vec<i32> = beta.iter().zip(&alpha).map(|(b, a)| b - (r + 1) * a).collect();
            if is_root(&c) {
                r += 1;
            } else {
                break;
            }
        }
        let nab = (r + 1) as i64;
        npos.insert((alpha.clone(), beta.clone()), nab);
        npos.insert((beta.clone(), alpha.clone()), -nab);
        let ee = form(eta, eta);
        for xi in pos.iter() {
            let zeta: Vec<i32> = eta.iter().zip(xi).map(|(e, x)| e - x).collect();
            if !order.contains_key(&zeta) || order[xi] >= order[&zeta] || *xi == alpha {
                continue;
            }
            // N_{xi,zeta} = (eta,eta)/N_{a,b} [N_{b,-xi}N_{a,-zeta}/(b-xi,b-xi) + N_{-xi,a}N_{b,-zeta}/(a-xi,a-xi)]
            let mut acc = Frac::new(0, 1);
            let b_xi = add(&beta, &negv(xi));
            if is_root(&b_xi) {
                let t = lookup(&beta, &negv(xi), &npos, &form, &sign).mul(lookup(&alpha, &negv(&zeta), &npos, &form, &sign));
                acc = acc.add(t.mul(Frac::new(1, form(&b_xi, &b_xi))));
            }
            let a_xi = add(&alpha, &negv(xi));
            if is_root(&a_xi) {
                let t = lookup(&negv(xi), &alpha, &npos, &form, &sign).mul(lookup(&beta, &negv(&zeta), &npos, &form, &sign));
                acc = acc.add(t.mul(Frac::new(1, form(&a_xi, &a_xi))));
            }
            let v = acc.mul(Frac::new(ee, nab));
            let v = v.int().ok_or_else(|| Error::DatumCheckFailed("non-integral structure constant".into()))?;
            npos.insert((xi.clone(), zeta.clone()), v);
            npos.insert((zeta.clone(), xi.clone()), -v);
        }
    }
    // every structure constant on a pair of roots
    let mut table: HashMap<(Weight, Weight), i32> = HashMap::new();
    let mut all: Vec<Vec<i32>> = pos.clone();
    all.extend(pos.iter().map(|c| negv(c)));
    for x in &all {
        for y in &all {
            let s = add(x, y);
            if s.iter().all(|&v| v == 0) || !is_root(&s) {
                continue;
            }
            let v = lookup(x, y, &npos, &form, &sign).int().ok_or_else(|| Error::DatumCheckFailed("non-integral N".into()))?;
            table.insert((to_x(x), to_x(y)), v as i32);
        }
    }
    let n_of = Box::new(move |x: &Weight, y: &Weight| -> i32 { table.get(&(*x, *y)).copied().unwrap_or(0) });
    let entries: Vec<(Weight, Vec<i32>, Vec<i32>, i64)> =
        pos.iter().map(|c| (to_x(c), c.clone(), coroot(c), form(c, c))).collect();
    let rho = Weight::new(&vec![1; n]);
    assemble(Assembly { kind: DatumKind::Cartan(name), p, d: n, cartan: cartan.to_vec(), pos: entries, n_of, rho })
}

/// Datum for a type name such as `"B2"` or `"G2"`.
pub fn build_from_type(t: &str, p: u32) -> Result<ChevalleyDatum> {
    if t.starts_with('F') || t.starts_with('E') {
        return Err(Error::UnsupportedType(t.to_string()));
    }
    let a = cartan_of_type(t)?;
    build_from_cartan(&a, p)
}

/// Subset `I` of the simple roots with its derived root sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LeviSpec {
    pub simple: Vec<usize>,
}

impl LeviSpec {
    pub fn new(datum: &ChevalleyDatum, mut simple: Vec<usize>) -> Result<Self> {
        simple.sort_unstable();
        simple.dedup();
        if simple.iter().any(|&i| i >= datum.n) {
            return Err(Error::InvalidInput(format!("levi index out of range 0..{}", datum.n)));
        }
        Ok(LeviSpec { simple })
    }

    pub fn empty() -> Self {
        LeviSpec { simple: Vec::new() }
    }

    pub fn full(datum: &ChevalleyDatum) -> Self {
        LeviSpec { simple: (0..datum.n).collect() }
    }

    pub fn contains_simple(&self, i: usize) -> bool {
        self.simple.contains(&i)
    }

    /// Whether root `i` lies in `ZI`.
    pub fn contains_root(&self, datum: &ChevalleyDatum, i: usize) -> bool {
        datum.coeffs(i).iter().enumerate().all(|(k, &c)| c == 0 || self.simple.contains(&k))
    }

    /// `R_I`
    pub fn roots(&self, datum: &ChevalleyDatum) -> Vec<usize> {
        (0..datum.num_roots()).filter(|&i| self.contains_root(datum, i)).collect()
    }

    /// `R_I^+`
    pub fn pos_roots(&self, datum: &ChevalleyDatum) -> Vec<usize> {
        (0..datum.num_pos()).filter(|&i| self.contains_root(datum, i)).collect()
    }

    /// Positive roots outside `ZI` (the roots of `u^+`).
    pub fn u_plus(&self, datum: &ChevalleyDatum) -> Vec<usize> {
        (0..datum.num_pos()).filter(|&i| !self.contains_root(datum, i)).collect()
    }

    /// Negative roots outside `ZI` (the roots of `u^-`).
    pub fn u_minus(&self, datum: &ChevalleyDatum) -> Vec<usize> {
        (datum.num_pos()..datum.num_roots()).filter(|&i| !self.contains_root(datum, i)).collect()
    }
}

/// A p-character in standard Levi form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PChar {
    pub levi: LeviSpec,
    /// `chi(e_alpha)` for every root index, in `{0, 1}`
    pub values: Vec<i64>,
}

pub fn standard_levi_chi(datum: &ChevalleyDatum, levi: &LeviSpec) -> PChar {
    let mut values = vec![0; datum.num_roots()];
    for &i in &levi.simple {
        values[datum.neg(i)] = 1;
    }
    PChar { levi: levi.clone(), values }
}

/// The automorphism tau attached to `I`, on root vectors and on the torus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauMap {
    pub levi: LeviSpec,
    pub p: u32,
    /// `tau(e_b)` is a multiple of `e_{target[b]}`; `target` realises `-w_I`
    pub target: Vec<usize>,
    /// `tau(e_b) = coef[b] e_{target[b]}`, reduced mod p
    pub coef: Vec<i64>,
    /// `tau^{-1}(e_b) = inv_coef[b] e_{target[b]}`
    pub inv_coef: Vec<i64>,
    /// `tau(h_j) = sum_i h[i][j] h_i`
    pub h: Vec<Vec<i64>>,
    pub h_inv: Vec<Vec<i64>>,
    /// integer matrix of `w_I` acting on X
    pub w: Vec<Vec<i64>>,
    /// reduced word used for `w_I`
    pub word: Vec<usize>,
}

impl TauMap {
    /// `tau` on X, equal to `-w_I`.
    pub fn on_weight(&self, lambda: &Weight) -> Weight {
        -apply_int(&self.w, lambda)
    }

    /// `w_I` on X.
    pub fn w_on_weight(&self, lambda: &Weight) -> Weight {
        apply_int(&self.w, lambda)
    }
}

pub(crate) fn apply_int(m: &[Vec<i64>], lambda: &Weight) -> Weight {
    let c = lambda.coords();
    Weight::new(&m.iter().map(|row| row.iter().zip(c).map(|(a, b)| a * *b as i64).sum::<i64>() as i32).collect::<Vec<_>>())
}

/// Matrix of the simple reflection `s_i` on X.
pub(crate) fn reflection_matrix(datum: &ChevalleyDatum, i: usize) -> Vec<Vec<i64>> {
    let d = datum.d;
    let mut m = vec![vec![0i64; d]; d];
    for j in 0..d {
        let img = datum.reflect(&Weight::unit(d, j), i);
        for (k, &v) in img.coords().iter().enumerate() {
            m[k][j] = v as i64;
        }
    }
    m
}

fn int_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let c = b[0].len();
    (0..n).map(|i| (0..c).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

/// `exp(ad x)` over F_p for a nilpotent `ad x` (entries mod p).
fn exp_ad(ad: &[Vec<i64>], p: i64) -> Result<Vec<Vec<i64>>> {
    let n = ad.len();
    let mut acc: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    let mut pw = acc.clone();
    let mut fact = 1i64;
    for k in 1.. {
        pw = mat_mul_mod(&pw, ad, p);
        if pw.iter().all(|r| r.iter().all(|&x| x == 0)) {
            break;
        }
        if k as i64 >= p {
            return Err(Error::TauConstructionFailed("ad e is not nilpotent below p".into()));
        }
        fact = fact * k as i64 % p;
        let c = inv_mod(fact, p).unwrap();
        for i in 0..n {
            for j in 0..n {
                acc[i][j] = (acc[i][j] + c * pw[i][j]).rem_euclid(p);
            }
        }
    }
    Ok(acc)
}

/// Builds `tau = t . n_{w_I} . omega` and verifies its defining properties.
pub fn tau(datum: &ChevalleyDatum, levi: &LeviSpec) -> Result<TauMap> {
    let p = datum.p as i64;
    let n = datum.dim_g();
    let nr = datum.num_roots();
    let fail = |m: String| Error::TauConstructionFailed(m);

    // reduced word for w_I: right-multiply by s_i while w(alpha_i) > 0
    let d = datum.d;
    let mut w: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect();
    let mut word = Vec::new();
    loop {
        let next = levi.simple.iter().copied().find(|&i| {
            let img = apply_int(&w, &datum.simple(i));
            datum.root_index(&img).map(|k| datum.is_positive(k)).unwrap_or(false)
        });
        match next {
            Some(i) => {
                w = int_mul(&w, &reflection_matrix(datum, i));
                word.push(i);
            }
            None => break,
        }
    }

    // omega: e_a -> -e_{-a}, h -> -h
    let mut omega = vec![vec![0i64; n]; n];
    for a in 0..nr {
        omega[datum.neg(a)][a] = p - 1;
    }
    for j in nr..n {
        omega[j][j] = p - 1;
    }
    let mut nw: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    for &i in &word {
        let ea = exp_ad(&mat_mod(&datum.ad_matrix(i), p), p)?;
        let neg_ad: Vec<Vec<i64>> =
            datum.ad_matrix(datum.neg(i)).iter().map(|r| r.iter().map(|x| (-x).rem_euclid(p)).collect()).collect();
        let ef = exp_ad(&neg_ad, p)?;
        let n_alpha = mat_mul_mod(&mat_mul_mod(&ea, &ef, p), &ea, p);
        nw = mat_mul_mod(&nw, &n_alpha, p);
    }
    let tau0 = mat_mul_mod(&nw, &omega, p);
    let tau0_inv = mat_inv_mod(&tau0, p).ok_or_else(|| fail("tau0 not invertible".into()))?;

    let target: Vec<usize> = (0..nr)
        .map(|b| {
            let img = -apply_int(&w, &datum.root(b));
            datum.root_index(&img).ok_or_else(|| fail(format!("-w_I maps root {b} outside R")))
        })
        .collect::<Result<_>>()?;

    // torus character fixing chi o tau^{-1} = -chi
    let mut t_simple = vec![1i64; datum.n];
    for &i in &levi.simple {
        let ni = datum.neg(i);
        let ti = target[ni];
        let c0 = tau0_inv[ti][ni];
        if c0 == 0 {
            return Err(fail(format!("tau0^-1(e_-alpha_{i}) is not monomial")));
        }
        t_simple[i] = (-inv_mod(c0, p).unwrap()).rem_euclid(p);
    }
    let t_of = |b: usize| -> i64 {
        let mut v = 1i64;
        for (k, &c) in datum.coeffs(b).iter().enumerate() {
            let base = if c >= 0 { t_simple[k] } else { inv_mod(t_simple[k], p).unwrap() };
            for _ in 0..c.unsigned_abs() {
                v = v * base % p;
            }
        }
        v
    };
    let mut tmat = vec![vec![0i64; n]; n];
    for b in 0..nr {
        tmat[b][b] = t_of(b);
    }
    for j in nr..n {
        tmat[j][j] = 1;
    }
    let tau_m = mat_mul_mod(&tmat, &tau0, p);
    let tau_inv = mat_inv_mod(&tau_m, p).ok_or_else(|| fail("tau not invertible".into()))?;

    // monomial on root vectors, toral on the torus
    let mut coef = vec![0i64; nr];
    let mut inv_coef = vec![0i64; nr];
    for b in 0..nr {
        for i in 0..n {
            let expected = i == target[b];
            if expected != (tau_m[i][b] != 0) {
                return Err(fail(format!("tau(e_{b}) is not a multiple of e_{}", target[b])));
            }
        }
        coef[b] = tau_m[target[b]][b];
        inv_coef[b] = tau_inv[target[b]][b];
    }
    let mut h = vec![vec![0i64; d]; d];
    let mut h_inv = vec![vec![0i64; d]; d];
    for j in 0..d {
        for i in 0..n {
            if i < nr && (tau_m[i][nr + j] != 0 || tau_inv[i][nr + j] != 0) {
                return Err(fail("tau does not preserve the torus".into()));
            }
            if i >= nr {
                h[i - nr][j] = tau_m[i][nr + j];
                h_inv[i - nr][j] = tau_inv[i][nr + j];
            }
        }
    }
    let map = TauMap { levi: levi.clone(), p: datum.p, target, coef, inv_coef, h, h_inv, w, word };
    verify_tau(datum, &map, &tau_m, &tau_inv)?;
    Ok(map)
}

fn verify_tau(datum: &ChevalleyDatum, t: &TauMap, tau_m: &[Vec<i64>], tau_inv: &[Vec<i64>]) -> Result<()> {
    let p = datum.p as i64;
    let n = datum.dim_g();
    let nr = datum.num_roots();
    let fail = |m: String| Err(Error::TauConstructionFailed(m));
    let col = |m: &[Vec<i64>], j: usize| -> Vec<i64> { (0..n).map(|i| m[i][j]).collect() };
    // automorphism
    for x in 0..n {
        for y in 0..n {
            let mut ex = vec![0i64; n];
            ex[x] = 1;
            let mut ey = vec![0i64; n];
            ey[y] = 1;
            let lhs_in = datum.bracket_dense(&ex, &ey, p);
            let lhs: Vec<i64> = (0..n).map(|i| (0..n).map(|k| tau_m[i][k] * lhs_in[k]).sum::<i64>().rem_euclid(p)).collect();
            let rhs = datum.bracket_dense(&col(tau_m, x), &col(tau_m, y), p);
            if lhs != rhs {
                return fail(format!("bracket not preserved on basis pair ({x},{y})"));
            }
        }
    }
    // chi o tau^{-1} = -chi
    let chi = standard_levi_chi(datum, &t.levi);
    for x in 0..n {
        let v = col(tau_inv, x);
        let lhs: i64 = (0..nr).map(|b| chi.values[b] * v[b]).sum::<i64>().rem_euclid(p);
        let rhs = if x < nr { (-chi.values[x]).rem_euclid(p) } else { 0 };
        if lhs != rhs {
            return fail(format!("chi o tau^-1 != -chi on basis element {x}"));
        }
    }
    // tau^{-1}(h_alpha) is a nonzero multiple of h_{w_I alpha}
    for a in 0..nr {
        let wa = apply_int(&t.w, &datum.root(a));
        let Some(wi) = datum.root_index(&wa) else {
            return fail(format!("w_I alpha_{a} is not a root"));
        };
        let ha: Vec<i64> = datum.coroot(a).iter().map(|&x| x as i64).collect();
        let img: Vec<i64> = (0..datum.d).map(|i| (0..datum.d).map(|j| t.h_inv[i][j] * ha[j]).sum::<i64>().rem_euclid(p)).collect();
        let hw: Vec<i64> = datum.coroot(wi).iter().map(|&x| (x as i64).rem_euclid(p)).collect();
        let k = (1..p).find(|&k| hw.iter().map(|x| x * k % p).eq(img.iter().copied()));
        if k.is_none() {
            return fail(format!("tau^-1(h_alpha) not proportional to h_(w_I alpha) for root {a}"));
        }
    }
    // compatibility of the actions on X and on the torus
    for l in 0..datum.d {
        let lam = Weight::unit(datum.d, l);
        let tl = t.on_weight(&lam);
        for j in 0..datum.d {
            let th: i64 = (0..datum.d).map(|i| t.h[i][j] * tl.coords()[i] as i64).sum::<i64>().rem_euclid(p);
            let base = lam.coords()[j] as i64 % p;
            if th != base.rem_euclid(p) {
                return fail("tau on X incompatible with tau on the torus".into());
            }
        }
    }
    Ok(())
}

/// Shared datum handle.
pub type DatumRef = Arc<ChevalleyDatum>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl2_has_one_positive_root() {
        let d = build_gl(2, 3).unwrap();
        assert_eq!(d.num_pos(), 1);
        assert_eq!(d.root(0), Weight::new(&[1, -1]));
        assert_eq!(d.coroot(0), &[1, -1]);
        assert_eq!(d.rho(), Weight::new(&[1, 0]));
    }

    #[test]
    fn gl_rejects_two() {
        assert!(matches!(build_gl(2, 2), Err(Error::BadPrime { .. })));
    }

    #[test]
    fn gl3_matrix_commutator() {
        let d = build_gl(3, 3).unwrap();
        // alpha1 + alpha2 = eps1 - eps3
        let s = d.sum_root(0, 1).unwrap();
        assert_eq!(d.root(s), Weight::new(&[1, 0, -1]));
        assert_eq!(d.n_const(0, 1), 1);
        assert_eq!(d.bracket(Basis::E(0), Basis::E(1)), vec![(Basis::E(s), 1)]);
        assert!(d.bracket(Basis::E(0), Basis::E(0)).is_empty());
        assert_eq!(d.rho(), Weight::new(&[2, 1, 0]));
    }

    #[test]
    fn bracket_with_opposite_is_coroot() {
        let d = build_gl(2, 5).unwrap();
        let hb = d.bracket(Basis::E(0), Basis::E(1));
        assert_eq!(hb, vec![(Basis::H(0), 1), (Basis::H(1), -1)]);
    }

    #[test]
    fn cartan_types_build() {
        for (t, p, npos) in [("A1", 5, 1), ("A2", 5, 3), ("B2", 3, 4), ("B2", 7, 4), ("C3", 5, 9), ("D4", 3, 12), ("G2", 7, 6), ("B3", 5, 9), ("A4", 3, 10)] {
            let d = build_from_type(t, p).unwrap_or_else(|e| panic!("{t}: {e}"));
            assert_eq!(d.num_pos(), npos, "{t}");
            assert_eq!(d.name(), t);
        }
    }

    #[test]
    fn cartan_prime_conditions() {
        assert!(matches!(build_from_type("B2", 2), Err(Error::BadPrime { .. })));
        assert!(matches!(build_from_type("G2", 3), Err(Error::BadPrime { .. })));
        assert!(matches!(build_from_type("A2", 3), Err(Error::BadPrime { .. })));
        assert!(matches!(build_from_type("F4", 5), Err(Error::UnsupportedType(_))));
        assert!(matches!(build_from_type("A5", 7), Err(Error::UnsupportedType(_))));
    }

    #[test]
    fn a1_matches_sl2_part_of_gl2() {
        let a1 = build_from_type("A1", 5).unwrap();
        let gl = build_gl(2, 5).unwrap();
        // [h, e] = 2e in both (h_alpha = E11 - E22 acting on E12)
        assert_eq!(a1.pairing(&a1.root(0), 0), 2);
        assert_eq!(gl.pairing(&gl.root(0), 0), 2);
        assert_eq!(a1.rho().coords(), &[1]);
    }

    #[test]
    fn build_is_deterministic() {
        let a = build_from_type("G2", 7).unwrap().dump();
        let b = build_from_type("G2", 7).unwrap().dump();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn chi_in_standard_levi_form() {
        let d = build_gl(3, 3).unwrap();
        let levi = LeviSpec::new(&d, vec![0]).unwrap();
        let chi = standard_levi_chi(&d, &levi);
        assert_eq!(chi.values[d.neg(0)], 1);
        assert_eq!(chi.values[d.neg(1)], 0);
        assert_eq!(chi.values[d.neg(2)], 0);
        assert!(chi.values[..3].iter().all(|&v| v == 0));
    }

    #[test]
    fn tau_for_empty_levi_is_chevalley_involution() {
        let d = build_gl(2, 3).unwrap();
        let t = tau(&d, &LeviSpec::empty()).unwrap();
        assert_eq!(t.target, vec![1, 0]);
        assert_eq!(t.coef, vec![2, 2]);
        assert_eq!(t.h, vec![vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn tau_builds_on_all_small_cases() {
        for n in 2..=4 {
            let d = build_gl(n, 3).unwrap();
            for mask in 0..(1u32 << (n - 1)) {
                let simple: Vec<usize> = (0..n - 1).filter(|i| mask >> i & 1 == 1).collect();
                let levi = LeviSpec::new(&d, simple).unwrap();
                let t = tau(&d, &levi).unwrap();
                for b in 0..d.num_roots() {
                    assert_eq!(t.target[t.target[b]], b);
                }
            }
        }
        for (ty, p) in [("B2", 3), ("C3", 5), ("G2", 5), ("D4", 3)] {
            let d = build_from_type(ty, p).unwrap();
            let levi = LeviSpec::full(&d);
            tau(&d, &levi).unwrap_or_else(|e| panic!("{ty}: {e}"));
            tau(&d, &LeviSpec::new(&d, vec![0]).unwrap()).unwrap();
        }
    }
}

#[cfg(test)]
mod coord_tests {
    use super::*;

    #[test]
    fn simple_coordinates() {
        let d = build_gl(3, 3).unwrap();
        assert_eq!(d.simple_coords(&Weight::new(&[1, 0, -1])), Some(vec![1, 1]));
        assert_eq!(d.simple_coords(&Weight::new(&[1, 0, 0])), None);
        let g = build_from_type("G2", 5).unwrap();
        let top = g.root(g.num_pos() - 1);
        assert_eq!(g.simple_coords(&top), Some(vec![3, 2]));
    }
}
