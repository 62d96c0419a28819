//! Exact feasibility of linear constraint systems by Fourier-Motzkin
//! elimination, with a witness or an infeasibility certificate.

use super::{clear_denominators, primitive, Rat, RatVector};
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

/// Relation of a linear constraint to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    /// `coeffs . x + constant >= 0`
    Ge,
    /// `coeffs . x + constant > 0`
    Gt,
    /// `coeffs . x + constant == 0`
    Eq,
}

/// A linear constraint `coeffs . x + constant (rel) 0`.
#[derive(Clone, Debug)]
pub struct LinCon {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
    pub rel: Rel,
}

impl LinCon {
    pub fn new(coeffs: Vec<Rat>, constant: Rat, rel: Rel) -> Self {
        LinCon { coeffs, constant, rel }
    }

    /// Value of `coeffs . x + constant` at a point.
    pub fn eval(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.coeffs.len());
        let mut v = self.constant.clone();
        for (c, xi) in self.coeffs.iter().zip(x) {
            v += c * xi;
        }
        v
    }

    /// Whether the constraint holds at a point.
    pub fn holds(&self, x: &[Rat]) -> bool {
        let v = self.eval(x);
        match self.rel {
            Rel::Ge => !v.is_negative(),
            Rel::Gt => v.is_positive(),
            Rel::Eq => v.is_zero(),
        }
    }
}

/// Multipliers proving a system infeasible: the combination of the original
/// constraints (nonnegative on inequalities, arbitrary sign on equalities)
/// has zero coefficients and either a negative constant, or a nonpositive
/// constant with positive weight on some strict inequality.
#[derive(Clone, Debug)]
pub struct InfeasCertificate {
    pub multipliers: Vec<Rat>,
}

impl InfeasCertificate {
    /// Check the certificate against the system it claims to refute.
    pub fn verify(&self, cons: &[LinCon]) -> bool {
        if self.multipliers.len() != cons.len() {
            return false;
        }
        let dim = cons.first().map_or(0, |c| c.coeffs.len());
        let mut combo = vec![Rat::zero(); dim];
        let mut constant = Rat::zero();
        let mut strict = false;
        for (m, c) in self.multipliers.iter().zip(cons) {
            if m.is_zero() {
                continue;
            }
            match c.rel {
                Rel::Ge | Rel::Gt => {
                    if m.is_negative() {
                        return false;
                    }
                }
                Rel::Eq => {}
            }
            if c.rel == Rel::Gt {
                strict = true;
            }
            for (acc, x) in combo.iter_mut().zip(&c.coeffs) {
                *acc += m * x;
            }
            constant += m * &c.constant;
        }
        if combo.iter().any(|x| !x.is_zero()) {
            return false;
        }
        constant.is_negative() || (strict && !constant.is_positive())
    }
}

/// Outcome of a feasibility query.
#[derive(Clone, Debug)]
pub enum Feasibility {
    Feasible(RatVector),
    Infeasible(InfeasCertificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Working row: constraint `coeffs . x + constant (>= | >) 0` together with
/// the multipliers expressing it over the original constraints.
#[derive(Clone)]
struct Row {
    coeffs: Vec<Rat>,
    constant: Rat,
    strict: bool,
    mult: Vec<Rat>,
}

impl Row {
    /// Scale so the (coeffs, constant) part is a primitive integer vector.
    fn normalize(&mut self) {
        let mut all: Vec<Rat> = self.coeffs.clone();
        all.push(self.constant.clone());
        let (mut ints, den) = clear_denominators(&all);
        let before: num_bigint::BigInt = ints
            .iter()
            .find(|x| !x.is_zero())
            .cloned()
            .unwrap_or_else(|| num_bigint::BigInt::from(1))
            .abs();
        primitive(&mut ints);
        let after: num_bigint::BigInt = ints
            .iter()
            .find(|x| !x.is_zero())
            .cloned()
            .unwrap_or_else(|| num_bigint::BigInt::from(1))
            .abs();
        // overall positive scale factor applied: den / gcd == den * after / before
        let scale = Rat::new(&den * &after, before);
        for (c, i) in self.coeffs.iter_mut().zip(&ints) {
            *c = Rat::from_integer(i.clone());
        }
        self.constant = Rat::from_integer(ints.last().unwrap().clone());
        for m in self.mult.iter_mut() {
            *m *= &scale;
        }
    }
}

/// Decide feasibility of a system of linear constraints over the rationals.
///
/// Returns a rational witness (re-checked against every constraint) or an
/// infeasibility certificate (verified before returning).
pub fn lin_feasible(cons: &[LinCon]) -> Feasibility {
    let dim = cons.first().map_or(0, |c| c.coeffs.len());
    for c in cons {
        assert_eq!(c.coeffs.len(), dim, "inconsistent constraint dimensions");
    }
    let n = cons.len();
    let mut rows: Vec<Row> = Vec::new();
    for (i, c) in cons.iter().enumerate() {
        let mut m = vec![Rat::zero(); n];
        m[i] = Rat::one();
        match c.rel {
            Rel::Ge | Rel::Gt => rows.push(Row {
                coeffs: c.coeffs.clone(),
                constant: c.constant.clone(),
                strict: c.rel == Rel::Gt,
                mult: m,
            }),
            Rel::Eq => {
                rows.push(Row {
                    coeffs: c.coeffs.clone(),
                    constant: c.constant.clone(),
                    strict: false,
                    mult: m.clone(),
                });
                let mut neg = vec![Rat::zero(); n];
                neg[i] = -Rat::one();
                rows.push(Row {
                    coeffs: c.coeffs.iter().map(|x| -x).collect(),
                    constant: -c.constant.clone(),
                    strict: false,
                    mult: neg,
                });
            }
        }
    }

    // Snapshots of the system before each elimination, with the variable
    // eliminated at that stage, for back-substitution.
    let mut stages: Vec<(usize, Vec<Row>)> = Vec::new();
    let mut remaining: Vec<usize> = (0..dim).collect();

    loop {
        match sift(rows) {
            Err(cert) => {
                debug_assert!(cert.verify(cons));
                assert!(cert.verify(cons), "infeasibility certificate failed to verify");
                return Feasibility::Infeasible(cert);
            }
            Ok(kept) => rows = kept,
        }
        if remaining.is_empty() {
            break;
        }
        // Greedy: eliminate the variable minimizing |positive| * |negative|.
        let var = *remaining
            .iter()
            .min_by_key(|&&v| {
                let p = rows.iter().filter(|r| r.coeffs[v].is_positive()).count();
                let q = rows.iter().filter(|r| r.coeffs[v].is_negative()).count();
                p * q
            })
            .unwrap();
        remaining.retain(|&v| v != var);
        stages.push((var, rows.clone()));
        rows = eliminate(&rows, var);
    }

    // Feasible: back-substitute a witness.
    let mut x = vec![Rat::zero(); dim];
    let mut fixed = vec![false; dim];
    for (var, sys) in stages.iter().rev() {
        x[*var] = pick_value(sys, *var, &x, &fixed);
        fixed[*var] = true;
    }
    for c in cons {
        assert!(c.holds(&x), "feasibility witness failed re-check");
    }
    Feasibility::Feasible(RatVector(x))
}

/// Project a constraint system onto the variables marked true in `keep`,
/// eliminating the others by Fourier-Motzkin. The result has the same
/// dimension with zero coefficients on eliminated variables, and its solution
/// set is exactly the projection of the input's.
pub fn project(cons: &[LinCon], keep: &[bool]) -> Vec<LinCon> {
    let dim = cons.first().map_or(0, |c| c.coeffs.len());
    assert_eq!(keep.len(), dim);
    let mut rows: Vec<Row> = cons
        .iter()
        .flat_map(|c| {
            let base = Row {
                coeffs: c.coeffs.clone(),
                constant: c.constant.clone(),
                strict: c.rel == Rel::Gt,
                mult: Vec::new(),
            };
            if c.rel == Rel::Eq {
                let neg = Row {
                    coeffs: c.coeffs.iter().map(|x| -x).collect(),
                    constant: -c.constant.clone(),
                    strict: false,
                    mult: Vec::new(),
                };
                vec![base, neg]
            } else {
                vec![base]
            }
        })
        .collect();
    for v in 0..dim {
        if !keep[v] {
            rows = eliminate(&rows, v);
            match sift(rows) {
                Ok(kept) => rows = kept,
                // Manifestly infeasible: the projection is empty.
                Err(_) => {
                    return vec![LinCon {
                        coeffs: vec![Rat::zero(); dim],
                        constant: -Rat::one(),
                        rel: Rel::Ge,
                    }];
                }
            }
        }
    }
    rows.into_iter()
        .map(|r| LinCon {
            coeffs: r.coeffs,
            constant: r.constant,
            rel: if r.strict { Rel::Gt } else { Rel::Ge },
        })
        .collect()
}

/// Drop satisfied variable-free rows, dedup parallel rows keeping the
/// strongest, and report an infeasibility certificate if one is manifest.
fn sift(rows: Vec<Row>) -> Result<Vec<Row>, InfeasCertificate> {
    let mut best: HashMap<Vec<Rat>, Row> = HashMap::new();
    for mut r in rows {
        if r.coeffs.iter().all(Rat::is_zero) {
            if r.constant.is_negative() || (r.strict && !r.constant.is_positive()) {
                return Err(InfeasCertificate { multipliers: r.mult });
            }
            continue;
        }
        r.normalize();
        match best.entry(r.coeffs.clone()) {
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(r);
            }
            std::collections::hash_map::Entry::Occupied(mut e) => {
                let old = e.get();
                let stronger = r.constant < old.constant
                    || (r.constant == old.constant && r.strict && !old.strict);
                if stronger {
                    e.insert(r);
                }
            }
        }
    }
    Ok(best.into_values().collect())
}

/// Fourier-Motzkin elimination of one variable.
fn eliminate(rows: &[Row], var: usize) -> Vec<Row> {
    let mut out: Vec<Row> = Vec::new();
    let pos: Vec<&Row> = rows.iter().filter(|r| r.coeffs[var].is_positive()).collect();
    let neg: Vec<&Row> = rows.iter().filter(|r| r.coeffs[var].is_negative()).collect();
    for r in rows {
        if r.coeffs[var].is_zero() {
            out.push(r.clone());
        }
    }
    for p in &pos {
        for q in &neg {
            let a = p.coeffs[var].clone(); // > 0
            let b = -q.coeffs[var].clone(); // > 0
            let coeffs: Vec<Rat> = p
                .coeffs
                .iter()
                .zip(&q.coeffs)
                .map(|(x, y)| &b * x + &a * y)
                .collect();
            let constant = &b * &p.constant + &a * &q.constant;
            let mult: Vec<Rat> = p
                .mult
                .iter()
                .zip(&q.mult)
                .map(|(x, y)| &b * x + &a * y)
                .collect();
            out.push(Row { coeffs, constant, strict: p.strict || q.strict, mult });
        }
    }
    out
}

/// Pick a value for `var` given a system in which all other still-unfixed
/// variables do not appear with `var` (the snapshot at `var`'s elimination
/// stage, with later-eliminated variables already fixed in `x`).
fn pick_value(sys: &[Row], var: usize, x: &[Rat], fixed: &[bool]) -> Rat {
    let mut lower: Option<(Rat, bool)> = None; // (bound, strict)
    let mut upper: Option<(Rat, bool)> = None;
    for r in sys {
        let a = &r.coeffs[var];
        if a.is_zero() {
            continue;
        }
        // This snapshot only mentions `var` and variables eliminated after
        // it, which are already fixed.
        let mut rest = r.constant.clone();
        for (j, c) in r.coeffs.iter().enumerate() {
            if j == var || c.is_zero() {
                continue;
            }
            debug_assert!(fixed[j], "unfixed variable in back-substitution");
            rest += c * &x[j];
        }
        let bound = -rest / a;
        if a.is_positive() {
            // a*v + rest >= 0  =>  v >= bound
            let better = lower
                .as_ref()
                .map_or(true, |(b, s)| bound > *b || (bound == *b && r.strict && !s));
            if better {
                lower = Some((bound, r.strict));
            }
        } else {
            let better = upper
                .as_ref()
                .map_or(true, |(b, s)| bound < *b || (bound == *b && r.strict && !s));
            if better {
                upper = Some((bound, r.strict));
            }
        }
    }
    match (lower, upper) {
        (None, None) => Rat::zero(),
        (Some((l, ls)), None) => {
            if ls {
                l + Rat::one()
            } else {
                l
            }
        }
        (None, Some((u, us))) => {
            if us {
                u - Rat::one()
            } else {
                u
            }
        }
        (Some((l, ls)), Some((u, _))) => {
            if !ls && l == u {
                l
            } else {
                (l + u) / Rat::from_integer(num_bigint::BigInt::from(2))
            }
        }
    }
}
