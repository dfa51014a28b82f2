//! Bounded integer linear systems and an exact feasibility search.

use std::fmt;

use super::FptError;

/// Largest admissible bound magnitude; keeps row sums far from overflow.
pub const MAX_BOUND: i64 = 1 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
}

impl fmt::Display for Cmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Var {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
}

/// `Σ coef·x  cmp  rhs`, terms sorted by variable index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub terms: Vec<(usize, i64)>,
    pub cmp: Cmp,
    pub rhs: i64,
}

impl Row {
    fn lhs(&self, x: &[i64]) -> i64 {
        self.terms.iter().map(|&(v, a)| a * x[v]).sum()
    }

    pub fn holds(&self, x: &[i64]) -> bool {
        let s = self.lhs(x);
        match self.cmp {
            Cmp::Lt => s < self.rhs,
            Cmp::Le => s <= self.rhs,
            Cmp::Gt => s > self.rhs,
            Cmp::Ge => s >= self.rhs,
        }
    }

    /// The row as `Σ a·x ≥ b`; strict rows gain a unit on the constant.
    fn normalized(&self) -> (Vec<(usize, i64)>, i64) {
        let neg = || self.terms.iter().map(|&(v, a)| (v, -a)).collect();
        match self.cmp {
            Cmp::Ge => (self.terms.clone(), self.rhs),
            Cmp::Gt => (self.terms.clone(), self.rhs + 1),
            Cmp::Le => (neg(), -self.rhs),
            Cmp::Lt => (neg(), -self.rhs + 1),
        }
    }
}

/// A conjunction of integer linear inequalities over bounded variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    vars: Vec<Var>,
    rows: Vec<Row>,
}

impl LinearSystem {
    pub fn new() -> Self {
        LinearSystem::default()
    }

    /// Declares a variable with inclusive bounds and returns its index.
    pub fn add_var(&mut self, name: impl Into<String>, lo: i64, hi: i64) -> Result<usize, FptError> {
        let name = name.into();
        if lo.abs() > MAX_BOUND || hi.abs() > MAX_BOUND {
            return Err(FptError::Unbounded(name));
        }
        self.vars.push(Var { name, lo, hi });
        Ok(self.vars.len() - 1)
    }

    /// Adds a row; repeated variables are merged and zero terms dropped.
    pub fn add_row(&mut self, terms: &[(usize, i64)], cmp: Cmp, rhs: i64) -> Result<(), FptError> {
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(terms.len());
        let mut sorted = terms.to_vec();
        sorted.sort_by_key(|t| t.0);
        for (v, a) in sorted {
            if v >= self.vars.len() {
                return Err(FptError::UnknownVariable(v));
            }
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += a,
                _ => merged.push((v, a)),
            }
        }
        merged.retain(|t| t.1 != 0);
        self.rows.push(Row { terms: merged, cmp, rhs });
        Ok(())
    }

    /// `Σ coef·x = rhs`, stored as a `≤` and a `≥` row.
    pub fn add_eq(&mut self, terms: &[(usize, i64)], rhs: i64) -> Result<(), FptError> {
        self.add_row(terms, Cmp::Le, rhs)?;
        self.add_row(terms, Cmp::Ge, rhs)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Whether `x` is within bounds and satisfies every row.
    pub fn satisfied_by(&self, x: &[i64]) -> bool {
        x.len() == self.vars.len()
            && self.vars.iter().zip(x).all(|(v, &xi)| v.lo <= xi && xi <= v.hi)
            && self.rows.iter().all(|r| r.holds(x))
    }

    /// One row per line, `c1*x1 + c2*x2 OP const`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            if r.terms.is_empty() {
                out.push('0');
            }
            for (k, &(v, a)) in r.terms.iter().enumerate() {
                if k > 0 {
                    out.push_str(" + ");
                }
                out.push_str(&format!("{a}*{}", self.vars[v].name));
            }
            out.push_str(&format!(" {} {}\n", r.cmp, r.rhs));
        }
        out
    }
}

/// The first assignment in variable-order depth-first search that satisfies
/// `sys`, or `None` if there is none.
///
/// After every fixing step each row tightens the bounds of its variables
/// until nothing changes; a branch dies as soon as some interval is empty.
pub fn solve_feasibility(sys: &LinearSystem) -> Option<Vec<i64>> {
    let rows: Vec<(Vec<(usize, i64)>, i64)> = sys.rows.iter().map(Row::normalized).collect();
    let lo: Vec<i64> = sys.vars.iter().map(|v| v.lo).collect();
    let hi: Vec<i64> = sys.vars.iter().map(|v| v.hi).collect();
    let mut watch: Vec<Vec<usize>> = vec![Vec::new(); sys.vars.len()];
    for (r, (terms, _)) in rows.iter().enumerate() {
        for &(v, _) in terms {
            watch[v].push(r);
        }
    }
    let prop = Propagator { rows: &rows, watch: &watch };
    let mut lo = lo;
    let mut hi = hi;
    let all: Vec<usize> = (0..rows.len()).collect();
    if !prop.run(&mut lo, &mut hi, &all) {
        return None;
    }
    prop.dfs(lo, hi)
}

struct Propagator<'a> {
    rows: &'a [(Vec<(usize, i64)>, i64)],
    watch: &'a [Vec<usize>],
}

impl Propagator<'_> {
    fn run(&self, lo: &mut [i64], hi: &mut [i64], start: &[usize]) -> bool {
        if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
            return false;
        }
        let mut queued = vec![false; self.rows.len()];
        let mut queue: Vec<usize> = Vec::new();
        for &r in start {
            if !queued[r] {
                queued[r] = true;
                queue.push(r);
            }
        }
        while let Some(r) = queue.pop() {
            queued[r] = false;
            let (terms, b) = &self.rows[r];
            let max: i64 = terms.iter().map(|&(v, a)| if a > 0 { a * hi[v] } else { a * lo[v] }).sum();
            if max < *b {
                return false;
            }
            for &(v, a) in terms {
                // a·x_v ≥ b − (max − own contribution)
                let need = *b - (max - if a > 0 { a * hi[v] } else { a * lo[v] });
                let changed = if a > 0 {
                    let l = -((-need).div_euclid(a));
                    if l > lo[v] {
                        lo[v] = l;
                        true
                    } else {
                        false
                    }
                } else {
                    let h = (-need).div_euclid(-a);
                    if h < hi[v] {
                        hi[v] = h;
                        true
                    } else {
                        false
                    }
                };
                if changed {
                    if lo[v] > hi[v] {
                        return false;
                    }
                    for &o in &self.watch[v] {
                        if o != r && !queued[o] {
                            queued[o] = true;
                            queue.push(o);
                        }
                    }
                }
            }
        }
        true
    }

    fn dfs(&self, lo: Vec<i64>, hi: Vec<i64>) -> Option<Vec<i64>> {
        let Some(v) = (0..lo.len()).find(|&v| lo[v] < hi[v]) else {
            return Some(lo);
        };
        for x in lo[v]..=hi[v] {
            let mut l = lo.clone();
            let mut h = hi.clone();
            l[v] = x;
            h[v] = x;
            if self.run(&mut l, &mut h, &self.watch[v]) {
                if let Some(sol) = self.dfs(l, h) {
                    return Some(sol);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contradictory_rows() {
        let mut s = LinearSystem::new();
        let x = s.add_var("x", 0, 5).unwrap();
        s.add_row(&[(x, 1)], Cmp::Ge, 1).unwrap();
        s.add_row(&[(x, 1)], Cmp::Le, 0).unwrap();
        assert_eq!(solve_feasibility(&s), None);
    }

    #[test]
    fn no_rows_gives_lower_bounds() {
        let mut s = LinearSystem::new();
        s.add_var("x", 2, 5).unwrap();
        s.add_var("y", -1, 3).unwrap();
        assert_eq!(solve_feasibility(&s), Some(vec![2, -1]));
    }

    #[test]
    fn strict_rows_are_integral() {
        let mut s = LinearSystem::new();
        let x = s.add_var("x", 0, 10).unwrap();
        let y = s.add_var("y", 0, 10).unwrap();
        s.add_row(&[(x, 2), (y, -3)], Cmp::Gt, 4).unwrap();
        s.add_row(&[(x, 1)], Cmp::Lt, 4).unwrap();
        let sol = solve_feasibility(&s).unwrap();
        assert!(s.satisfied_by(&sol));
        assert_eq!(sol, vec![3, 0]);
    }

    #[test]
    fn huge_bounds_are_refused() {
        let mut s = LinearSystem::new();
        assert!(matches!(s.add_var("x", 0, i64::MAX), Err(FptError::Unbounded(_))));
    }

    #[test]
    fn unknown_variable_is_refused() {
        let mut s = LinearSystem::new();
        assert!(matches!(s.add_row(&[(0, 1)], Cmp::Ge, 0), Err(FptError::UnknownVariable(0))));
    }

    #[test]
    fn dump_format() {
        let mut s = LinearSystem::new();
        let x = s.add_var("x1", 0, 3).unwrap();
        let y = s.add_var("x2", 0, 3).unwrap();
        s.add_row(&[(y, -1), (x, 2)], Cmp::Ge, 1).unwrap();
        s.add_row(&[(x, 1), (x, -1)], Cmp::Lt, 0).unwrap();
        assert_eq!(s.dump(), "2*x1 + -1*x2 >= 1\n0 < 0\n");
        assert_eq!(solve_feasibility(&s), None);
    }
}
