//! Integer weights and sublattices of `Z^d`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const MAX_RANK: usize = 4;

/// An element of the character lattice, stored in a fixed-size array.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight {
    d: u8,
    c: [i32; MAX_RANK],
}

impl Weight {
    pub fn new(coords: &[i32]) -> Self {
        assert!(coords.len() <= MAX_RANK, "rank {} exceeds {}", coords.len(), MAX_RANK);
        let mut c = [0; MAX_RANK];
        c[..coords.len()].copy_from_slice(coords);
        Weight { d: coords.len() as u8, c }
    }

    pub fn zero(d: usize) -> Self {
        Weight::new(&vec![0; d])
    }

    pub fn unit(d: usize, i: usize) -> Self {
        let mut w = Weight::zero(d);
        w.c[i] = 1;
        w
    }

    pub fn rank(&self) -> usize {
        self.d as usize
    }

    pub fn coords(&self) -> &[i32] {
        &self.c[..self.d as usize]
    }

    pub fn coords_mut(&mut self) -> &mut [i32] {
        let d = self.d as usize;
        &mut self.c[..d]
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|&x| x == 0)
    }

    /// Coordinate-wise reduction into `0..p`.
    pub fn mod_p(&self, p: u32) -> Weight {
        let mut w = *self;
        for x in w.coords_mut() {
            *x = x.rem_euclid(p as i32);
        }
        w
    }

    pub fn dot(&self, other: &[i32]) -> i64 {
        self.coords().iter().zip(other).map(|(a, b)| *a as i64 * *b as i64).sum()
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(mut self, rhs: Weight) -> Weight {
        debug_assert_eq!(self.d, rhs.d);
        for i in 0..MAX_RANK {
            self.c[i] += rhs.c[i];
        }
        self
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(mut self, rhs: Weight) -> Weight {
        debug_assert_eq!(self.d, rhs.d);
        for i in 0..MAX_RANK {
            self.c[i] -= rhs.c[i];
        }
        self
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(mut self) -> Weight {
        for x in self.c.iter_mut() {
            *x = -*x;
        }
        self
    }
}

impl Mul<Weight> for i32 {
    type Output = Weight;
    fn mul(self, mut w: Weight) -> Weight {
        for x in w.c.iter_mut() {
            *x *= self;
        }
        w
    }
}

impl AddAssign for Weight {
    fn add_assign(&mut self, rhs: Weight) {
        *self = *self + rhs;
    }
}

impl SubAssign for Weight {
    fn sub_assign(&mut self, rhs: Weight) {
        *self = *self - rhs;
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<i32>::deserialize(d)?;
        if v.len() > MAX_RANK {
            return Err(serde::de::Error::custom("weight rank too large"));
        }
        Ok(Weight::new(&v))
    }
}

/// A sublattice of `Z^d` with a row-echelon basis, giving canonical coset
/// representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    d: usize,
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl Sublattice {
    pub fn zero(d: usize) -> Self {
        Sublattice { d, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn generated_by(d: usize, gens: &[Vec<i64>]) -> Self {
        let mut m: Vec<Vec<i64>> = gens.iter().filter(|g| g.iter().any(|&x| x != 0)).cloned().collect();
        for g in &m {
            assert_eq!(g.len(), d);
        }
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..d {
            loop {
                // bring the smallest nonzero entry of column c (rows r..) to row r
                let Some(best) = (r..m.len()).filter(|&i| m[i][c] != 0).min_by_key(|&i| m[i][c].abs()) else {
                    break;
                };
                m.swap(r, best);
                let mut done = true;
                for i in r + 1..m.len() {
                    if m[i][c] != 0 {
                        let q = m[i][c].div_euclid(m[r][c]);
                        for j in 0..d {
                            m[i][j] -= q * m[r][j];
                        }
                        if m[i][c] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if r < m.len() && m[r][c] != 0 {
                if m[r][c] < 0 {
                    for x in m[r].iter_mut() {
                        *x = -*x;
                    }
                }
                pivots.push(c);
                r += 1;
            }
            m.retain(|row| row.iter().any(|&x| x != 0));
        }
        rows.extend(m.into_iter().take(r));
        // reduce entries above pivots so the basis itself is canonical
        for k in 0..rows.len() {
            for i in 0..k {
                let (pc, pv) = (pivots[k], rows[k][pivots[k]]);
                let q = rows[i][pc].div_euclid(pv);
                if q != 0 {
                    let rk = rows[k].clone();
                    for j in 0..d {
                        rows[i][j] -= q * rk[j];
                    }
                }
            }
        }
        Sublattice { d, rows, pivots }
    }

    pub fn from_weights(d: usize, gens: &[Weight]) -> Self {
        let g: Vec<Vec<i64>> = gens.iter().map(|w| w.coords().iter().map(|&x| x as i64).collect()).collect();
        Self::generated_by(d, &g)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Canonical representative of `v + L`.
    pub fn reduce(&self, v: &Weight) -> Weight {
        let mut x: Vec<i64> = v.coords().iter().map(|&a| a as i64).collect();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let q = x[c].div_euclid(row[c]);
            if q != 0 {
                for j in 0..self.d {
                    x[j] -= q * row[j];
                }
            }
        }
        Weight::new(&x.iter().map(|&a| a as i32).collect::<Vec<_>>())
    }

    pub fn contains(&self, v: &Weight) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn scaled(&self, k: i64) -> Sublattice {
        let g: Vec<Vec<i64>> = self.rows.iter().map(|r| r.iter().map(|x| x * k).collect()).collect();
        Self::generated_by(self.d, &g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_arithmetic() {
        let a = Weight::new(&[1, -2, 3]);
        let b = Weight::new(&[0, 5, -1]);
        assert_eq!(a + b, Weight::new(&[1, 3, 2]));
        assert_eq!(a - b, Weight::new(&[1, -7, 4]));
        assert_eq!(-a, Weight::new(&[-1, 2, -3]));
        assert_eq!(3 * a, Weight::new(&[3, -6, 9]));
        assert_eq!(a.to_string(), "(1,-2,3)");
    }

    #[test]
    fn coset_reduction_of_root_lattice() {
        // Z(1,-1) inside Z^2
        let l = Sublattice::from_weights(2, &[Weight::new(&[1, -1])]);
        let a = l.reduce(&Weight::new(&[3, -3]));
        assert!(a.is_zero());
        assert_eq!(l.reduce(&Weight::new(&[2, 5])), l.reduce(&Weight::new(&[7, 0])));
        assert_ne!(l.reduce(&Weight::new(&[2, 5])), l.reduce(&Weight::new(&[7, 1])));
    }

    #[test]
    fn scaled_lattice_membership() {
        let l = Sublattice::from_weights(3, &[Weight::new(&[1, -1, 0]), Weight::new(&[0, 1, -1])]).scaled(3);
        assert!(l.contains(&Weight::new(&[3, 0, -3])));
        assert!(!l.contains(&Weight::new(&[1, 0, -1])));
        assert!(!l.contains(&Weight::new(&[3, 0, 0])));
    }

    #[test]
    fn serde_weight() {
        let w = Weight::new(&[2, -1]);
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, "[2,-1]");
        assert_eq!(serde_json::from_str::<Weight>(&s).unwrap(), w);
    }
}
