//! Exact rational linear feasibility by Fourier–Motzkin elimination.
//!
//! Decides systems of linear equalities and (possibly strict) inequalities
//! over the rationals. A feasible system yields an exact witness; an
//! infeasible one yields a nonnegative-combination certificate that
//! re-verifies by substitution. No floating point, no external solver.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::Rat;

/// Relation of a constraint `coeffs . x REL rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Ge,
    Gt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Rel,
    pub rhs: Rat,
}

impl Constraint {
    pub fn holds_for(&self, x: &[Rat]) -> bool {
        let lhs = crate::linalg::dot(&self.coeffs, x);
        match self.rel {
            Rel::Eq => lhs == self.rhs,
            Rel::Ge => lhs >= self.rhs,
            Rel::Gt => lhs > self.rhs,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
}

/// An infeasibility certificate: multipliers indexed into the system's
/// constraint list. Multipliers on inequality rows are nonnegative; on
/// equality rows they may take either sign. The certified combination has
/// zero coefficients and a contradictory constant part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub multipliers: Vec<(usize, Rat)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rat>),
    Infeasible(Certificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(&self) -> Option<&[Rat]> {
        match self {
            Feasibility::Feasible(w) => Some(w),
            Feasibility::Infeasible(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Feasibility::Feasible(_) => None,
            Feasibility::Infeasible(c) => Some(c),
        }
    }
}

/// Internal inequality row `coeffs . x >= rhs` (strict when `strict`),
/// carrying the combination of original constraints that derived it.
#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<Rat>,
    strict: bool,
    rhs: Rat,
    combo: BTreeMap<usize, Rat>,
}

impl Row {
    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// A constant row `0 >= rhs` (or `0 > rhs`) that cannot hold.
    fn is_contradiction(&self) -> bool {
        debug_assert!(self.is_constant());
        self.rhs.is_positive() || (self.strict && !self.rhs.is_negative())
    }

    /// Scales by a positive factor so the first nonzero coefficient is +-1;
    /// used as a deduplication key.
    fn normalize(&mut self) {
        if let Some(first) = self.coeffs.iter().find(|c| !c.is_zero()) {
            let scale = Rat::one() / first.clone().abs();
            if scale != Rat::one() {
                for c in &mut self.coeffs {
                    *c *= scale.clone();
                }
                self.rhs *= scale.clone();
                for m in self.combo.values_mut() {
                    *m *= scale.clone();
                }
            }
        }
    }
}

struct Stage {
    var: usize,
    rows: Vec<Row>,
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            constraints: Vec::new(),
        }
    }

    pub fn push(&mut self, coeffs: Vec<Rat>, rel: Rel, rhs: Rat) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    /// Convenience constraint: `x[var] REL rhs`.
    pub fn push_var(&mut self, var: usize, rel: Rel, rhs: Rat) {
        let mut coeffs = vec![Rat::zero(); self.num_vars];
        coeffs[var] = Rat::one();
        self.push(coeffs, rel, rhs);
    }

    pub fn check_witness(&self, x: &[Rat]) -> bool {
        x.len() == self.num_vars && self.constraints.iter().all(|c| c.holds_for(x))
    }

    /// Re-verifies an infeasibility certificate by substitution.
    pub fn check_certificate(&self, cert: &Certificate) -> bool {
        let mut coeffs = vec![Rat::zero(); self.num_vars];
        let mut rhs = Rat::zero();
        let mut strict = false;
        for (idx, mult) in &cert.multipliers {
            let Some(c) = self.constraints.get(*idx) else {
                return false;
            };
            match c.rel {
                Rel::Eq => {}
                Rel::Ge | Rel::Gt => {
                    if mult.is_negative() {
                        return false;
                    }
                }
            }
            if mult.is_zero() {
                continue;
            }
            for (j, v) in c.coeffs.iter().enumerate() {
                coeffs[j] += mult * v;
            }
            rhs += mult * &c.rhs;
            if c.rel == Rel::Gt {
                strict = true;
            }
        }
        if coeffs.iter().any(|v| !v.is_zero()) {
            return false;
        }
        rhs.is_positive() || (strict && !rhs.is_negative())
    }

    /// Decides feasibility, producing a witness or a certificate.
    pub fn solve(&self) -> Feasibility {
        let mut rows: Vec<Row> = Vec::new();
        let mut contradiction: Option<Certificate> = None;

        let add_row = |rows: &mut Vec<Row>, mut row: Row| -> Option<Certificate> {
            if row.is_constant() {
                if row.is_contradiction() {
                    return Some(Certificate {
                        multipliers: row.combo.into_iter().collect(),
                    });
                }
                return None;
            }
            row.normalize();
            // keep only the strongest row per coefficient vector
            for existing in rows.iter_mut() {
                if existing.coeffs == row.coeffs {
                    let stronger = row.rhs > existing.rhs
                        || (row.rhs == existing.rhs && row.strict && !existing.strict);
                    if stronger {
                        *existing = row;
                    }
                    return None;
                }
            }
            rows.push(row);
            None
        };

        for (idx, c) in self.constraints.iter().enumerate() {
            let mut push = |coeffs: Vec<Rat>, strict: bool, rhs: Rat, mult: Rat| {
                let mut combo = BTreeMap::new();
                combo.insert(idx, mult);
                if let Some(cert) = add_row(
                    &mut rows,
                    Row {
                        coeffs,
                        strict,
                        rhs,
                        combo,
                    },
                ) {
                    contradiction.get_or_insert(cert);
                }
            };
            match c.rel {
                Rel::Ge => push(c.coeffs.clone(), false, c.rhs.clone(), Rat::one()),
                Rel::Gt => push(c.coeffs.clone(), true, c.rhs.clone(), Rat::one()),
                Rel::Eq => {
                    push(c.coeffs.clone(), false, c.rhs.clone(), Rat::one());
                    push(
                        c.coeffs.iter().map(|v| -v.clone()).collect(),
                        false,
                        -c.rhs.clone(),
                        -Rat::one(),
                    );
                }
            }
        }
        if let Some(cert) = contradiction {
            return Feasibility::Infeasible(cert);
        }

        let mut remaining: Vec<usize> = (0..self.num_vars).collect();
        let mut stages: Vec<Stage> = Vec::new();

        while let Some(pos_in_remaining) = pick_variable(&rows, &remaining) {
            let var = remaining.remove(pos_in_remaining);
            let mut lower: Vec<Row> = Vec::new();
            let mut upper: Vec<Row> = Vec::new();
            let mut rest: Vec<Row> = Vec::new();
            for row in rows {
                if row.coeffs[var].is_positive() {
                    lower.push(row);
                } else if row.coeffs[var].is_negative() {
                    upper.push(row);
                } else {
                    rest.push(row);
                }
            }

            let mut next = rest;
            for lo in &lower {
                for hi in &upper {
                    let a = lo.coeffs[var].clone(); // > 0
                    let b = -hi.coeffs[var].clone(); // > 0
                    let wa = Rat::one() / a;
                    let wb = Rat::one() / b;
                    let coeffs: Vec<Rat> = (0..self.num_vars)
                        .map(|j| &wa * &lo.coeffs[j] + &wb * &hi.coeffs[j])
                        .collect();
                    let rhs = &wa * &lo.rhs + &wb * &hi.rhs;
                    let mut combo = BTreeMap::new();
                    for (k, v) in &lo.combo {
                        combo.insert(*k, &wa * v);
                    }
                    for (k, v) in &hi.combo {
                        let scaled = &wb * v;
                        *combo.entry(*k).or_insert_with(Rat::zero) += scaled;
                    }
                    let row = Row {
                        coeffs,
                        strict: lo.strict || hi.strict,
                        rhs,
                        combo,
                    };
                    if let Some(cert) = add_row(&mut next, row) {
                        return Feasibility::Infeasible(cert);
                    }
                }
            }

            let mut involved = lower;
            involved.append(&mut upper);
            stages.push(Stage {
                var,
                rows: involved,
            });
            rows = next;
        }
        debug_assert!(remaining.is_empty(), "every variable gets a stage");

        // remaining rows are constant and consistent (contradictions were
        // caught as they appeared)
        debug_assert!(rows
            .iter()
            .all(|r| r.is_constant() && !r.is_contradiction()));

        let mut x = vec![Rat::zero(); self.num_vars];
        for stage in stages.iter().rev() {
            let mut lower: Option<(Rat, bool)> = None;
            let mut upper: Option<(Rat, bool)> = None;
            for row in &stage.rows {
                let c = &row.coeffs[stage.var];
                debug_assert!(!c.is_zero());
                let mut partial = row.rhs.clone();
                for (j, coeff) in row.coeffs.iter().enumerate() {
                    if j != stage.var && !coeff.is_zero() {
                        partial -= coeff * &x[j];
                    }
                }
                let bound = partial / c;
                if c.is_positive() {
                    lower = Some(merge_bound(lower.take(), bound, row.strict, true));
                } else {
                    upper = Some(merge_bound(upper.take(), bound, row.strict, false));
                }
            }
            x[stage.var] = choose_value(lower, upper);
        }

        debug_assert!(self.check_witness(&x));
        Feasibility::Feasible(x)
    }
}

/// Heuristic: eliminate the variable with the fewest lower-by-upper pairs.
/// Returns the position within `remaining`.
fn pick_variable(rows: &[Row], remaining: &[usize]) -> Option<usize> {
    if remaining.is_empty() {
        return None;
    }
    let mut best = 0;
    let mut best_cost = usize::MAX;
    for (pos, &var) in remaining.iter().enumerate() {
        let pos_count = rows.iter().filter(|r| r.coeffs[var].is_positive()).count();
        let neg_count = rows.iter().filter(|r| r.coeffs[var].is_negative()).count();
        let cost = pos_count * neg_count;
        if cost < best_cost {
            best_cost = cost;
            best = pos;
        }
    }
    Some(best)
}

fn merge_bound(
    current: Option<(Rat, bool)>,
    value: Rat,
    strict: bool,
    is_lower: bool,
) -> (Rat, bool) {
    match current {
        None => (value, strict),
        Some((cur, cur_strict)) => {
            let replaces = if is_lower { value > cur } else { value < cur };
            if replaces {
                (value, strict)
            } else if value == cur {
                (cur, cur_strict || strict)
            } else {
                (cur, cur_strict)
            }
        }
    }
}

fn choose_value(lower: Option<(Rat, bool)>, upper: Option<(Rat, bool)>) -> Rat {
    match (lower, upper) {
        (None, None) => Rat::zero(),
        (Some((lo, strict)), None) => {
            if strict {
                lo + Rat::one()
            } else {
                lo
            }
        }
        (None, Some((hi, strict))) => {
            if strict {
                hi - Rat::one()
            } else {
                hi
            }
        }
        (Some((lo, lo_strict)), Some((hi, hi_strict))) => {
            debug_assert!(lo <= hi);
            if lo == hi {
                debug_assert!(!lo_strict && !hi_strict);
                lo
            } else {
                (lo + hi) / Rat::from_integer(2.into())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn c(vals: &[i64]) -> Vec<Rat> {
        vals.iter().map(|&v| rat(v, 1)).collect()
    }

    #[test]
    fn simple_feasible() {
        let mut sys = LinearSystem::new(2);
        sys.push(c(&[1, 1]), Rel::Eq, rat(1, 1));
        sys.push_var(0, Rel::Ge, rat(0, 1));
        sys.push_var(1, Rel::Ge, rat(0, 1));
        let result = sys.solve();
        let w = result.witness().expect("feasible");
        assert!(sys.check_witness(w));
    }

    #[test]
    fn strict_feasible() {
        let mut sys = LinearSystem::new(2);
        sys.push(c(&[2, 1]), Rel::Eq, rat(1, 1));
        sys.push_var(0, Rel::Gt, rat(0, 1));
        sys.push_var(1, Rel::Gt, rat(0, 1));
        let w = sys.solve().witness().unwrap().to_vec();
        assert!(sys.check_witness(&w));
        assert!(w[0].is_positive() && w[1].is_positive());
    }

    #[test]
    fn infeasible_with_certificate() {
        // x >= 1 and x <= 0
        let mut sys = LinearSystem::new(1);
        sys.push_var(0, Rel::Ge, rat(1, 1));
        sys.push(c(&[-1]), Rel::Ge, rat(0, 1));
        let result = sys.solve();
        let cert = result.certificate().expect("infeasible");
        assert!(sys.check_certificate(cert));
    }

    #[test]
    fn strict_infeasible_at_boundary() {
        // x > 0 and x <= 0
        let mut sys = LinearSystem::new(1);
        sys.push_var(0, Rel::Gt, rat(0, 1));
        sys.push(c(&[-1]), Rel::Ge, rat(0, 1));
        let cert = sys.solve().certificate().cloned().expect("infeasible");
        assert!(sys.check_certificate(&cert));
    }

    #[test]
    fn equalities_pin_the_witness() {
        let mut sys = LinearSystem::new(3);
        sys.push(c(&[1, 1, 0]), Rel::Eq, rat(2, 1));
        sys.push(c(&[0, 1, 1]), Rel::Eq, rat(3, 1));
        sys.push(c(&[1, 0, -1]), Rel::Eq, rat(-1, 1));
        let w = sys.solve().witness().unwrap().to_vec();
        assert!(sys.check_witness(&w));
    }

    #[test]
    fn contradictory_equalities() {
        let mut sys = LinearSystem::new(2);
        sys.push(c(&[1, 1]), Rel::Eq, rat(1, 1));
        sys.push(c(&[2, 2]), Rel::Eq, rat(3, 1));
        let cert = sys.solve().certificate().cloned().expect("infeasible");
        assert!(sys.check_certificate(&cert));
    }

    #[test]
    fn zero_variable_system() {
        let sys = LinearSystem::new(0);
        assert!(sys.solve().is_feasible());
    }

    #[test]
    fn unbounded_direction_is_still_feasible() {
        let mut sys = LinearSystem::new(2);
        sys.push(c(&[1, -1]), Rel::Ge, rat(5, 1));
        let w = sys.solve().witness().unwrap().to_vec();
        assert!(sys.check_witness(&w));
    }

    #[test]
    fn certificate_rejects_tampering() {
        let mut sys = LinearSystem::new(1);
        sys.push_var(0, Rel::Ge, rat(1, 1));
        sys.push(c(&[-1]), Rel::Ge, rat(0, 1));
        let mut cert = sys.solve().certificate().cloned().unwrap();
        cert.multipliers[0].1 = rat(-1, 1);
        assert!(!sys.check_certificate(&cert));
    }
}
