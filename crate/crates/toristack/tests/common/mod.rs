#![allow(dead_code)]

//! Helpers for the acceptance suite: a deterministic RNG, random fans and
//! matrices, and the brute-force quotient enumeration oracle.

use std::collections::BTreeSet;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use toristack_core::exactalg::IntMatrix;
use toristack_core::fan::Fan;
use toristack_core::stackbuild::StackyFan;
use toristack_core::Int;

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
    IntMatrix::from_fn(rows, cols, |_, _| Int::from(rng.int_in(-bound, bound)))
}

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
                let f = Int::from(rng.int_in(-3, 3));
                m.add_row_multiple(i, j, &f);
            }
            1 => m.swap_rows(i, j),
            _ => m.negate_row(i),
        }
    }
    m
}

/// Brute-force order of `Z^rows / im(a)`: a column Hermite form reduction
/// provides canonical coset representatives, and the quotient is enumerated
/// by breadth-first closure of the generators. Independent of the Smith
/// normal form code path.
pub fn brute_force_quotient_order(a: &IntMatrix, cap: usize) -> Option<Int> {
    let rows = a.rows();
    if rows == 0 {
        return Some(Int::one());
    }
    let h = column_hermite(a);
    for row in 0..rows {
        if row >= h.cols() || h[(row, row)].is_zero() {
            return None; // a row without pivot: infinite quotient
        }
    }

    let reduce = |mut v: Vec<Int>| -> Vec<Int> {
        for row in 0..rows {
            let q = v[row].div_floor(&h[(row, row)]);
            if q.is_zero() {
                continue;
            }
            for r in row..rows {
                let delta = &q * &h[(r, row)];
                v[r] -= delta;
            }
        }
        v
    };

    let mut seen: BTreeSet<Vec<Int>> = BTreeSet::new();
    let mut frontier = vec![reduce(vec![Int::zero(); rows])];
    seen.insert(frontier[0].clone());
    while let Some(v) = frontier.pop() {
        for generator in 0..rows {
            let mut next = v.clone();
            next[generator] += 1;
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

fn column_hermite(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let (rows, cols) = (h.rows(), h.cols());
    let mut pivot_col = 0;
    for row in 0..rows {
        if pivot_col == cols {
            break;
        }
        loop {
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
        mk(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]),
        mk(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        ),
        mk(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -2]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        ),
        mk(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        ),
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

/// A random valid stacky fan with `dim <= 3` and at most eight rays: a base
/// fan under a random unimodular lattice change, ray permutation and labels.
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

/// Random relabelling of a fixed fan.
pub fn with_random_labels(rng: &mut TestRng, fan: &Fan, max_label: u32) -> StackyFan {
    let labels: Vec<u32> = (0..fan.num_rays())
        .map(|_| rng.below(max_label as u64) as u32 + 1)
        .collect();
    StackyFan::new(fan.clone(), labels).expect("fan is complete")
}

pub fn random_permutation(rng: &mut TestRng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.below((i + 1) as u64) as usize;
        perm.swap(i, j);
    }
    perm
}
