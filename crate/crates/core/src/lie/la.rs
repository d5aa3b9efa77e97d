//! Exact rational vectors, dense matrices, and reduced row echelon form
//! with deterministic first-nonzero pivoting.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub type Rat = num_rational::BigRational;
pub type Mat = Vec<Vec<Rat>>;

pub fn unit(dim: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); dim];
    v[i] = Rat::one();
    v
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_neg(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn vec_is_zero(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn mat_zero(rows: usize, cols: usize) -> Mat {
    vec![vec![Rat::zero(); cols]; rows]
}

pub fn mat_identity(n: usize) -> Mat {
    let mut m = mat_zero(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rat::one();
    }
    m
}

pub fn mat_vec(m: &Mat, v: &[Rat]) -> Vec<Rat> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .map(|(a, b)| a * b)
                .fold(Rat::zero(), |acc, x| acc + x)
        })
        .collect()
}

/// Column `j` as a vector.
pub fn mat_col(m: &Mat, j: usize) -> Vec<Rat> {
    m.iter().map(|row| row[j].clone()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    let mut out = mat_zero(rows, cols);
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

pub fn mat_sub(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, s)| vec_sub(r, s)).collect()
}

pub fn mat_is_zero(a: &Mat) -> bool {
    a.iter().all(|r| vec_is_zero(r))
}

/// A row space kept in reduced row echelon form. Rows are inserted one at a
/// time; pivots are always the first nonzero coordinate, so the quotient
/// basis (the non-pivot coordinates) is reproducible.
#[derive(Debug, Clone)]
pub struct RowSpace {
    dim: usize,
    /// rows sorted by pivot column, each normalised to a leading one
    rows: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(dim: usize) -> RowSpace {
        RowSpace {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns that are not pivots, in ascending order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.dim).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Residual of a vector after full reduction against the space.
    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = v[p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &c * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        vec_is_zero(&self.reduce(v))
    }

    /// Insert a row; returns true when the rank grew.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = v[p].clone();
        for x in v.iter_mut() {
            *x /= &lead;
        }
        // eliminate the new pivot from existing rows to stay fully reduced
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    *x -= &c * y;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    /// Coordinates of the class of `v` on the non-pivot columns.
    pub fn quotient_coordinates(&self, v: &[Rat]) -> Vec<Rat> {
        let r = self.reduce(v);
        self.free_columns().iter().map(|&c| r[c].clone()).collect()
    }
}

pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat, super::LieError> {
    let bad = || super::LieError::Parse(s.to_string());
    let parse_int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad());
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(bad());
            }
            let num = parse_int(n)?;
            Ok(Rat::new(num, den))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    #[test]
    fn rref_rank_and_quotient() {
        let mut rs = RowSpace::new(3);
        assert!(rs.insert(&[r(1), r(2), r(3)]));
        assert!(rs.insert(&[r(0), r(1), r(1)]));
        assert!(!rs.insert(&[r(1), r(3), r(4)])); // dependent
        assert_eq!(rs.rank(), 2);
        assert_eq!(rs.free_columns(), vec![2]);
        assert!(rs.contains(&[r(2), r(5), r(7)]));
        let q = rs.quotient_coordinates(&[r(0), r(0), r(5)]);
        assert_eq!(q, vec![r(5)]);
    }

    #[test]
    fn rational_parsing_roundtrip() {
        for s in ["3", "-7", "1/2", "-22/7"] {
            let v = parse_rat(s).unwrap();
            assert_eq!(rat_to_string(&v), s);
        }
        assert_eq!(rat_to_string(&parse_rat("4/8").unwrap()), "1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }
}
