//! Exact rational linear algebra on small dense matrices.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// Exact rational number. Always reduced with a positive denominator.
pub type Rat = Ratio<i128>;
/// Point or vector of `M_Q` / `N_Q`.
pub type RatVec = Vec<Rat>;
/// Integral vector; used where integrality carries meaning (rays, weights).
pub type LatticeVec = Vec<i64>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n as i128)
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(n as i128, d as i128)
}

pub fn to_rat(v: &[i64]) -> RatVec {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn zero_vec(n: usize) -> RatVec {
    vec![Rat::zero(); n]
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[Rat], b: &[i64]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, &y)| {
        acc + x * Rat::from_integer(y as i128)
    })
}

pub fn add(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rat], s: Rat) -> RatVec {
    a.iter().map(|x| x * s).collect()
}

pub fn is_zero(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn is_integral(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_integer())
}

/// Integral coordinates of `a`, if it is a lattice point.
pub fn to_lattice(a: &[Rat]) -> Option<LatticeVec> {
    a.iter()
        .map(|x| x.is_integer().then(|| x.to_integer() as i64))
        .collect()
}

/// Smallest positive integer `k` such that `k * a` is integral.
pub fn denominator_lcm(a: &[Rat]) -> i128 {
    a.iter().fold(1i128, |acc, x| acc.lcm(x.denom()))
}

/// Primitive integral vector on the ray spanned by `a`. Zero maps to zero.
pub fn primitive(a: &[Rat]) -> LatticeVec {
    let l = denominator_lcm(a);
    let ints: Vec<i128> = a
        .iter()
        .map(|x| (x * Rat::from_integer(l)).to_integer())
        .collect();
    let g = ints.iter().fold(0i128, |acc, x| acc.gcd(x));
    if g == 0 {
        return vec![0; a.len()];
    }
    ints.iter().map(|x| (x / g) as i64).collect()
}

pub fn primitive_int(a: &[i64]) -> LatticeVec {
    let g = a.iter().fold(0i64, |acc, x| acc.gcd(x));
    if g == 0 {
        return a.to_vec();
    }
    a.iter().map(|x| x / g).collect()
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[RatVec], ncols: usize) -> (Vec<RatVec>, Vec<usize>) {
    let mut m: Vec<RatVec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..ncols {
                    let t = m[r][j] * f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[RatVec], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : row . x = 0 for every row}`.
pub fn nullspace(rows: &[RatVec], ncols: usize) -> Vec<RatVec> {
    let (m, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = zero_vec(ncols);
            v[f] = Rat::one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -row[f];
            }
            v
        })
        .collect()
}

/// Determinant of a square matrix given by rows.
pub fn det(rows: &[RatVec]) -> Rat {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let t = m[c][j] * f;
                m[i][j] -= t;
            }
        }
    }
    d
}

/// Solves `sum_i coeff_i * cols[i] = target` when the columns are linearly
/// independent. Returns `None` if `target` is not in their span.
pub fn solve_combination(cols: &[RatVec], target: &[Rat]) -> Option<RatVec> {
    let n = target.len();
    let k = cols.len();
    // augmented system: rows are coordinates
    let rows: Vec<RatVec> = (0..n)
        .map(|i| {
            let mut r: RatVec = cols.iter().map(|c| c[i]).collect();
            r.push(target[i]);
            r
        })
        .collect();
    let (m, pivots) = rref(&rows, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut sol = zero_vec(k);
    for (row, &p) in m.iter().zip(&pivots) {
        sol[p] = row[k];
    }
    Some(sol)
}

/// Orthogonal projection of `v` onto the orthogonal complement of `span`.
pub fn project_out(v: &[Rat], span: &[RatVec]) -> RatVec {
    let basis = gram_schmidt(span);
    let mut out = v.to_vec();
    for b in &basis {
        let f = dot(&out, b) / dot(b, b);
        out = sub(&out, &scale(b, f));
    }
    out
}

fn gram_schmidt(vs: &[RatVec]) -> Vec<RatVec> {
    let mut basis: Vec<RatVec> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for b in &basis {
            let f = dot(&w, b) / dot(b, b);
            w = sub(&w, &scale(b, f));
        }
        if !is_zero(&w) {
            basis.push(w);
        }
    }
    basis
}

/// Canonical lattice basis description of a linear subspace: RREF rows scaled
/// to primitive integral vectors.
pub fn canonical_subspace(vs: &[RatVec], ncols: usize) -> Vec<LatticeVec> {
    let (m, _) = rref(vs, ncols);
    m.iter().map(|r| primitive(r)).collect()
}

/// Completes a primitive integral vector to a lattice basis of `Z^n`.
/// The first returned vector is `u` itself.
pub fn complete_basis(u: &[i64]) -> Vec<LatticeVec> {
    let n = u.len();
    let mut cur: Vec<i64> = u.to_vec();
    let mut b: Vec<LatticeVec> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    // Invariant: u = sum_i cur[i] * b[i].
    loop {
        let nz: Vec<usize> = (0..n).filter(|&i| cur[i] != 0).collect();
        if nz.len() <= 1 {
            break;
        }
        let (i, j) = {
            let mut s = nz.clone();
            s.sort_by_key(|&k| cur[k].abs());
            (s[0], s[1])
        };
        // cur[j] -> cur[j] - q cur[i]; keep u fixed by b[i] += q b[j]
        let q = cur[j] / cur[i];
        cur[j] -= q * cur[i];
        let bj = b[j].clone();
        for (x, y) in b[i].iter_mut().zip(&bj) {
            *x += q * y;
        }
    }
    let k = (0..n).find(|&i| cur[i] != 0).expect("nonzero vector");
    assert_eq!(cur[k].abs(), 1, "vector must be primitive");
    if cur[k] < 0 {
        for x in b[k].iter_mut() {
            *x = -*x;
        }
    }
    let mut out = vec![b[k].clone()];
    out.extend((0..n).filter(|&i| i != k).map(|i| b[i].clone()));
    debug_assert_eq!(out[0], u);
    out
}

pub fn floor(x: Rat) -> i128 {
    x.floor().to_integer()
}

pub fn abs(x: Rat) -> Rat {
    x.abs()
}
