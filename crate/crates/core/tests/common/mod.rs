#![allow(dead_code)] // each test target uses a different subset

//! Shared helpers for the integration tests: a deterministic RNG,
//! independent brute-force oracles, and generators for random matrices,
//! fans and polytopes.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use toristack_core::exactalg::IntMatrix;
use toristack_core::fan::Fan;
use toristack_core::polytope::{Facet, HalfSpace, LabelledPolytope};
use toristack_core::stackbuild::StackyFan;
use toristack_core::{int, rat, Int, Rat};

/// xorshift64* with a fixed seed; tests must be reproducible.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}

pub fn random_matrix(rng: &mut TestRng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| int(rng.int_in(-bound, bound)))
}

/// Random unimodular matrix: a short product of elementary operations.
pub fn random_unimodular(rng: &mut TestRng, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..8 {
        let i = rng.below(n as u64) as usize;
        let mut j = rng.below(n as u64) as usize;
        if i == j {
            j = (j + 1) % n;
        }
        match rng.below(3) {
            0 => {
                let f = int(rng.int_in(-3, 3));
                m.add_row_multiple(i, j, &f);
            }
            1 => m.swap_rows(i, j),
            _ => m.negate_row(i),
        }
    }
    m
}

/// Column-style Hermite form of the column lattice of `a` (lower
/// triangular), computed with integer column operations only. Deliberately
/// independent of the Smith normal form implementation.
fn column_hermite(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let (rows, cols) = (h.rows(), h.cols());
    let mut pivot_col = 0;
    for row in 0..rows {
        if pivot_col == cols {
            break;
        }
        loop {
            // find the column (from pivot_col on) with smallest nonzero
            // entry in this row
            let mut best: Option<usize> = None;
            for c in pivot_col..cols {
                if h[(row, c)].is_zero() {
                    continue;
                }
                match best {
                    Some(b) if h[(row, b)].abs() <= h[(row, c)].abs() => {}
                    _ => best = Some(c),
                }
            }
            let Some(b) = best else {
                break;
            };
            h.swap_cols(pivot_col, b);
            if h[(row, pivot_col)].is_negative() {
                h.negate_col(pivot_col);
            }
            let mut done = true;
            for c in pivot_col + 1..cols {
                if h[(row, c)].is_zero() {
                    continue;
                }
                let q = h[(row, c)].div_floor(&h[(row, pivot_col)]);
                if !q.is_zero() {
                    let neg_q = -q;
                    h.add_col_multiple(c, pivot_col, &neg_q);
                }
                if !h[(row, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                pivot_col += 1;
                break;
            }
        }
    }
    h
}

/// Brute-force order of `Z^rows / im(a)` by enumerating the quotient:
/// breadth-first closure of the generator images with Hermite reduction as
/// the canonical form. Returns `None` when the quotient is infinite or
/// larger than `cap`.
pub fn brute_force_quotient_order(a: &IntMatrix, cap: usize) -> Option<Int> {
    let rows = a.rows();
    if rows == 0 {
        return Some(Int::one());
    }
    let h = column_hermite(a);
    // basis columns with pivots per row; infinite quotient if some row has
    // no pivot
    let mut pivots: Vec<usize> = Vec::new();
    {
        let mut col = 0;
        for row in 0..rows {
            if col < h.cols() && !h[(row, col)].is_zero() {
                pivots.push(col);
                col += 1;
            } else {
                return None;
            }
        }
    }

    let reduce = |mut v: Vec<Int>| -> Vec<Int> {
        for row in 0..rows {
            let col = pivots[row];
            let q = v[row].div_floor(&h[(row, col)]);
            if q.is_zero() {
                continue;
            }
            for r in row..rows {
                let delta = &q * &h[(r, col)];
                v[r] -= delta;
            }
        }
        v
    };

    let mut seen: BTreeSet<Vec<Int>> = BTreeSet::new();
    let mut frontier = vec![reduce(vec![Int::zero(); rows])];
    seen.insert(frontier[0].clone());
    while let Some(v) = frontier.pop() {
        for gen in 0..rows {
            let mut next = v.clone();
            next[gen] += 1;
            let next = reduce(next);
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return None;
                }
                frontier.push(next);
            }
        }
    }
    Some(Int::from(seen.len()))
}

/// Invariant factors via greatest common divisors of all `k x k` minors;
/// exponential, so only usable on small matrices.
pub fn minor_gcd_invariant_factors(a: &IntMatrix) -> Vec<Int> {
    let n = a.rows().min(a.cols());
    let mut result = Vec::with_capacity(n);
    let mut previous = Int::one();
    for k in 1..=n {
        let mut gcd = Int::zero();
        for row_set in subsets(a.rows(), k) {
            for col_set in subsets(a.cols(), k) {
                let minor = IntMatrix::from_fn(k, k, |i, j| a[(row_set[i], col_set[j])].clone());
                gcd = gcd.gcd(&minor.det());
            }
        }
        if gcd.is_zero() {
            for _ in k..=n {
                result.push(Int::zero());
            }
            return result;
        }
        result.push(&gcd / &previous);
        previous = gcd;
    }
    result
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn base_fans() -> Vec<Fan> {
    let mk = |dim: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>| {
        Fan::new(
            dim,
            rays.into_iter()
                .map(|r| r.into_iter().map(Int::from).collect())
                .collect(),
            cones
                .into_iter()
                .map(|c| c.into_iter().collect::<BTreeSet<_>>())
                .collect(),
        )
    };
    vec![
        // interval
        mk(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]),
        // triangle (projective plane)
        mk(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        ),
        // weighted projective plane
        mk(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -2]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        ),
        // square
        mk(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        ),
        // hexagon
        mk(
            2,
            vec![
                vec![1, 0],
                vec![1, 1],
                vec![0, 1],
                vec![-1, 0],
                vec![-1, -1],
                vec![0, -1],
            ],
            vec![
                vec![0, 1],
                vec![1, 2],
                vec![2, 3],
                vec![3, 4],
                vec![4, 5],
                vec![0, 5],
            ],
        ),
        // projective three-space
        // diamond: trivial labels already carry torsion in the quotient
        mk(
            2,
            vec![vec![1, 1], vec![1, -1], vec![-1, -1], vec![-1, 1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        ),
        mk(
            3,
            vec![
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![-1, -1, -1],
            ],
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        ),
        // octahedron (product of three lines)
        mk(
            3,
            vec![
                vec![1, 0, 0],
                vec![-1, 0, 0],
                vec![0, 1, 0],
                vec![0, -1, 0],
                vec![0, 0, 1],
                vec![0, 0, -1],
            ],
            vec![
                vec![0, 2, 4],
                vec![0, 2, 5],
                vec![0, 3, 4],
                vec![0, 3, 5],
                vec![1, 2, 4],
                vec![1, 2, 5],
                vec![1, 3, 4],
                vec![1, 3, 5],
            ],
        ),
        // line times plane
        mk(
            3,
            vec![
                vec![1, 0, 0],
                vec![-1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![0, -1, -1],
            ],
            vec![
                vec![0, 2, 3],
                vec![0, 3, 4],
                vec![0, 2, 4],
                vec![1, 2, 3],
                vec![1, 3, 4],
                vec![1, 2, 4],
            ],
        ),
    ]
}

/// A random valid stacky fan: a base fan hit with a random unimodular
/// change of lattice, a random relabelling of the rays, and random labels.
pub fn random_stacky_fan(rng: &mut TestRng, max_label: u32) -> StackyFan {
    let fans = base_fans();
    let fan = &fans[rng.below(fans.len() as u64) as usize];
    let d = fan.dim();
    let u = random_unimodular(rng, d);

    let m = fan.num_rays();
    let mut perm: Vec<usize> = (0..m).collect();
    for i in (1..m).rev() {
        let j = rng.below((i + 1) as u64) as usize;
        perm.swap(i, j);
    }
    let mut inverse = vec![0usize; m];
    for (new, &old) in perm.iter().enumerate() {
        inverse[old] = new;
    }

    let rays: Vec<Vec<Int>> = perm
        .iter()
        .map(|&old| u.mul_vec(&fan.rays()[old]))
        .collect();
    let cones: Vec<BTreeSet<usize>> = fan
        .max_cones()
        .iter()
        .map(|c| c.iter().map(|&r| inverse[r]).collect())
        .collect();
    let labels: Vec<u32> = (0..m)
        .map(|_| rng.below(max_label as u64) as u32 + 1)
        .collect();
    StackyFan::new(Fan::new(d, rays, cones), labels).expect("base fans are complete")
}

fn base_polytopes() -> Vec<LabelledPolytope> {
    let facet = |normal: Vec<i64>, eta_num: i64, eta_den: i64| Facet {
        halfspace: HalfSpace::new(
            normal.into_iter().map(Int::from).collect(),
            rat(eta_num, eta_den),
        ),
        label: 1,
    };
    vec![
        // unit interval
        LabelledPolytope::new(1, vec![facet(vec![1], 0, 1), facet(vec![-1], 1, 1)]),
        // triangle of the projective plane
        LabelledPolytope::new(
            2,
            vec![
                facet(vec![1, 0], 0, 1),
                facet(vec![0, 1], 0, 1),
                facet(vec![-1, -1], 1, 1),
            ],
        ),
        // weighted projective plane
        LabelledPolytope::new(
            2,
            vec![
                facet(vec![1, 0], 0, 1),
                facet(vec![0, 1], 0, 1),
                facet(vec![-1, -2], 2, 1),
            ],
        ),
        // pentagon: square with a corner cut
        LabelledPolytope::new(
            2,
            vec![
                facet(vec![1, 0], 0, 1),
                facet(vec![0, 1], 0, 1),
                facet(vec![-1, 0], 2, 1),
                facet(vec![0, -1], 2, 1),
                facet(vec![-1, -1], 3, 1),
            ],
        ),
        // diamond: rational but not smooth, vertices each carry Z/2
        LabelledPolytope::new(
            2,
            vec![
                facet(vec![1, 1], 1, 1),
                facet(vec![1, -1], 1, 1),
                facet(vec![-1, -1], 1, 1),
                facet(vec![-1, 1], 1, 1),
            ],
        ),
        // corner-cut cube
        LabelledPolytope::new(
            3,
            vec![
                facet(vec![1, 0, 0], 0, 1),
                facet(vec![0, 1, 0], 0, 1),
                facet(vec![0, 0, 1], 0, 1),
                facet(vec![-1, 0, 0], 1, 1),
                facet(vec![0, -1, 0], 1, 1),
                facet(vec![0, 0, -1], 1, 1),
                facet(vec![-1, -1, -1], 5, 2),
            ],
        ),
    ]
}

/// A random valid labelled polytope: a base shape with random labels and a
/// random rational translation.
pub fn random_polytope(rng: &mut TestRng, max_label: u32) -> LabelledPolytope {
    let shapes = base_polytopes();
    let p = &shapes[rng.below(shapes.len() as u64) as usize];
    let labelled = LabelledPolytope::new(
        p.dim(),
        p.facets()
            .iter()
            .map(|f| Facet {
                halfspace: f.halfspace.clone(),
                label: rng.below(max_label as u64) as u32 + 1,
            })
            .collect(),
    );
    let shift: Vec<Rat> = (0..p.dim())
        .map(|_| rat(rng.int_in(-6, 6), rng.int_in(1, 4)))
        .collect();
    labelled.translate(&shift)
}

/// Random permutation of `0..n`.
pub fn random_permutation(rng: &mut TestRng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.below((i + 1) as u64) as usize;
        perm.swap(i, j);
    }
    perm
}
