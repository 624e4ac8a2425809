//! Exact rational linear programming.
//!
//! A dictionary-form simplex over `Rational` with Bland's anti-cycling rule,
//! so every run terminates and every reported optimum is exact. Free
//! variables are split into nonnegative pairs, equality rows become paired
//! inequalities, and an infeasible start is repaired by a two-phase scheme
//! whose phase-1 optimum is nonzero exactly when the program is infeasible.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{RatVector, Rational};

/// `minimize objective . x` subject to `ineq` rows (`a . x <= b`) and `eq`
/// rows (`e . x = d`); all variables are free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    objective: RatVector,
    ineq: Vec<(RatVector, Rational)>,
    eq: Vec<(RatVector, Rational)>,
}

impl LinearProgram {
    pub fn minimize(objective: RatVector) -> Self {
        LinearProgram {
            objective,
            ineq: Vec::new(),
            eq: Vec::new(),
        }
    }

    pub fn leq(mut self, row: RatVector, rhs: Rational) -> Self {
        self.ineq.push((row, rhs));
        self
    }

    pub fn eq(mut self, row: RatVector, rhs: Rational) -> Self {
        self.eq.push((row, rhs));
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        for (row, _) in self.ineq.iter().chain(self.eq.iter()) {
            if row.len() != n {
                return Err(Error::input(format!(
                    "constraint row has {} columns, objective has {}",
                    row.len(),
                    n
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpSolution {
    Optimal { value: Rational, point: RatVector },
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn optimal(&self) -> Option<(&Rational, &RatVector)> {
        match self {
            LpSolution::Optimal { value, point } => Some((value, point)),
            _ => None,
        }
    }

    pub fn expect_optimal(&self, what: &str) -> (&Rational, &RatVector) {
        self.optimal()
            .unwrap_or_else(|| panic!("LP for {what} must be solvable, got {self:?}"))
    }
}

// Variable ids: 0..2n split structural (u_q = 2q, v_q = 2q+1), then slacks,
// then the phase-1 artificial. Bland's rule works on this fixed order.
struct Dictionary {
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    rows: Vec<Vec<Rational>>, // x_B[i] = rhs[i] - sum_j rows[i][j] * x_N[j]
    rhs: Vec<Rational>,
    obj: Vec<Rational>, // z = obj0 + sum_j obj[j] * x_N[j]
    obj0: Rational,
}

enum Phase2 {
    Optimal,
    Unbounded,
}

impl Dictionary {
    fn pivot(&mut self, r: usize, jc: usize) {
        let p = self.rows[r][jc].clone();
        debug_assert!(!p.is_zero(), "pivot element must be nonzero");
        let inv = p.recip();
        let width = self.nonbasic.len();

        for j in 0..width {
            if j != jc {
                let val = &self.rows[r][j] * &inv;
                self.rows[r][j] = val;
            }
        }
        self.rows[r][jc] = inv.clone();
        let val = &self.rhs[r] * &inv;
        self.rhs[r] = val;

        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();

        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let coef = self.rows[i][jc].clone();
            if coef.is_zero() {
                continue;
            }
            for j in 0..width {
                if j != jc && !pivot_row[j].is_zero() {
                    let sub = &coef * &pivot_row[j];
                    self.rows[i][j] -= sub;
                }
            }
            self.rows[i][jc] = -(&coef * &pivot_row[jc]);
            if !pivot_rhs.is_zero() {
                let sub = &coef * &pivot_rhs;
                self.rhs[i] -= sub;
            }
        }

        let co = self.obj[jc].clone();
        if !co.is_zero() {
            for j in 0..width {
                if j != jc && !pivot_row[j].is_zero() {
                    let sub = &co * &pivot_row[j];
                    self.obj[j] -= sub;
                }
            }
            self.obj[jc] = -(&co * &pivot_row[jc]);
            if !pivot_rhs.is_zero() {
                self.obj0 += &co * &pivot_rhs;
            }
        }

        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[jc]);
    }

    /// Rewrites the objective row for cost vector `cost` indexed by var id.
    fn install_objective(&mut self, cost: &dyn Fn(usize) -> Rational) {
        let width = self.nonbasic.len();
        self.obj0 = Rational::zero();
        self.obj = vec![Rational::zero(); width];
        for (j, &var) in self.nonbasic.iter().enumerate() {
            self.obj[j] = cost(var);
        }
        for (i, &var) in self.basic.iter().enumerate() {
            let c = cost(var);
            if c.is_zero() {
                continue;
            }
            self.obj0 += &c * &self.rhs[i];
            for j in 0..width {
                if !self.rows[i][j].is_zero() {
                    let sub = &c * &self.rows[i][j];
                    self.obj[j] -= sub;
                }
            }
        }
    }

    /// Bland's rule: enter the lowest-id improving variable, leave by the
    /// minimum ratio with lowest-id ties. Runs until optimal or unbounded.
    fn run_simplex(&mut self) -> Result<Phase2> {
        let mut guard = 0usize;
        loop {
            guard += 1;
            if guard > 5_000_000 {
                return Err(Error::internal("simplex iteration guard tripped"));
            }
            let mut enter: Option<(usize, usize)> = None; // (var id, column)
            for (j, &var) in self.nonbasic.iter().enumerate() {
                if self.obj[j] < Rational::zero() && enter.map_or(true, |(v, _)| var < v) {
                    enter = Some((var, j));
                }
            }
            let Some((_, jc)) = enter else {
                return Ok(Phase2::Optimal);
            };
            let mut leave: Option<(Rational, usize, usize)> = None; // (ratio, var id, row)
            for i in 0..self.rows.len() {
                let a = &self.rows[i][jc];
                if *a <= Rational::zero() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let replace = match &leave {
                    None => true,
                    Some((best, var, _)) => {
                        ratio < *best || (ratio == *best && self.basic[i] < *var)
                    }
                };
                if replace {
                    leave = Some((ratio, self.basic[i], i));
                }
            }
            let Some((_, _, r)) = leave else {
                return Ok(Phase2::Unbounded);
            };
            self.pivot(r, jc);
        }
    }
}

/// Solves the program exactly. The returned point satisfies every constraint
/// with exact rational arithmetic and attains the reported value exactly.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;
    let n = lp.num_vars();

    // Assemble `a . w <= b` over split variables w = (u_0, v_0, u_1, v_1, ...),
    // with each equality row expanded to a pair of inequalities.
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    let split = |row: &RatVector, negate: bool| -> Vec<Rational> {
        let mut out = Vec::with_capacity(2 * n);
        for q in 0..n {
            let c = if negate { -&row[q] } else { row[q].clone() };
            out.push(c.clone());
            out.push(-c);
        }
        out
    };
    for (row, b) in &lp.ineq {
        rows.push(split(row, false));
        rhs.push(b.clone());
    }
    for (row, d) in &lp.eq {
        rows.push(split(row, false));
        rhs.push(d.clone());
        rows.push(split(row, true));
        rhs.push(-d);
    }

    let m = rows.len();
    let mut dict = Dictionary {
        basic: (2 * n..2 * n + m).collect(),
        nonbasic: (0..2 * n).collect(),
        rows,
        rhs,
        obj: Vec::new(),
        obj0: Rational::zero(),
    };

    let artificial = 2 * n + m;
    let needs_phase1 = dict.rhs.iter().any(|b| *b < Rational::zero());
    if needs_phase1 {
        // One artificial column: x_B = rhs + x0, pivoted into the worst row.
        let mut worst = 0usize;
        for i in 1..m {
            if dict.rhs[i] < dict.rhs[worst] {
                worst = i;
            }
        }
        for row in dict.rows.iter_mut() {
            row.push(-Rational::one());
        }
        dict.nonbasic.push(artificial);
        dict.obj = vec![Rational::zero(); dict.nonbasic.len()];
        let jc = dict.nonbasic.len() - 1;
        dict.pivot(worst, jc);
        debug_assert!(dict.rhs.iter().all(|b| *b >= Rational::zero()));

        dict.install_objective(&|var| {
            if var == artificial {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        match dict.run_simplex()? {
            Phase2::Unbounded => {
                return Err(Error::internal("phase-1 objective cannot be unbounded"))
            }
            Phase2::Optimal => {}
        }
        if dict.obj0 > Rational::zero() {
            return Ok(LpSolution::Infeasible);
        }
        // Drive the artificial out of the basis if it rests there at zero.
        if let Some(r) = dict.basic.iter().position(|&v| v == artificial) {
            debug_assert!(dict.rhs[r].is_zero());
            let jc = (0..dict.nonbasic.len()).find(|&j| !dict.rows[r][j].is_zero());
            match jc {
                Some(jc) => dict.pivot(r, jc),
                None => {
                    // Redundant all-zero row; discard it with the artificial.
                    dict.basic.remove(r);
                    dict.rows.remove(r);
                    dict.rhs.remove(r);
                }
            }
        }
        if let Some(jc) = dict.nonbasic.iter().position(|&v| v == artificial) {
            dict.nonbasic.remove(jc);
            for row in dict.rows.iter_mut() {
                row.remove(jc);
            }
        }
    }

    let objective = lp.objective.clone();
    dict.install_objective(&|var| {
        if var < 2 * n {
            let q = var / 2;
            if var % 2 == 0 {
                objective[q].clone()
            } else {
                -&objective[q]
            }
        } else {
            Rational::zero()
        }
    });

    match dict.run_simplex()? {
        Phase2::Unbounded => return Ok(LpSolution::Unbounded),
        Phase2::Optimal => {}
    }

    let mut split_values = vec![Rational::zero(); 2 * n];
    for (i, &var) in dict.basic.iter().enumerate() {
        if var < 2 * n {
            split_values[var] = dict.rhs[i].clone();
        }
    }
    let point = RatVector::new(
        (0..n)
            .map(|q| &split_values[2 * q] - &split_values[2 * q + 1])
            .collect(),
    );
    let value = dict.obj0.clone();

    debug_assert_eq!(objective.dot(&point), value);
    debug_assert!(lp.ineq.iter().all(|(row, b)| row.dot(&point) <= *b));
    debug_assert!(lp.eq.iter().all(|(row, d)| row.dot(&point) == *d));

    Ok(LpSolution::Optimal { value, point })
}
