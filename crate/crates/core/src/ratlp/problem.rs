use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDef {
    pub name: String,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinExpr {
    pub terms: Vec<(Var, Rational)>,
}

impl LinExpr {
    pub fn new() -> Self {
        LinExpr::default()
    }

    pub fn var(v: Var) -> Self {
        LinExpr { terms: alloc::vec![(v, Rational::one())] }
    }

    pub fn add(&mut self, v: Var, c: Rational) {
        self.terms.push((v, c));
    }

    pub fn with(mut self, v: Var, c: Rational) -> Self {
        self.add(v, c);
        self
    }

    pub fn eval(&self, values: &[Rational]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (v, c)| acc + c * &values[v.0])
    }

    fn is_empty(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_zero())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub expr: LinExpr,
    pub rel: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpError {
    UnknownVariable { constraint: String, var: usize },
    BinaryBounds(String),
}

impl fmt::Display for LpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpError::UnknownVariable { constraint, var } => {
                write!(f, "{constraint} refers to undeclared variable #{var}")
            }
            LpError::BinaryBounds(v) => write!(f, "binary variable {v} must have bounds [0, 1]"),
        }
    }
}

impl core::error::Error for LpError {}

/// A linear program, optionally with 0-1 variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub vars: Vec<VarDef>,
    pub constraints: Vec<Constraint>,
    pub sense: Sense,
    pub objective: LinExpr,
    pub binaries: BTreeSet<Var>,
}

impl Default for LpProblem {
    fn default() -> Self {
        LpProblem {
            vars: Vec::new(),
            constraints: Vec::new(),
            sense: Sense::Minimize,
            objective: LinExpr::new(),
            binaries: BTreeSet::new(),
        }
    }
}

impl LpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: Option<Rational>, upper: Option<Rational>) -> Var {
        self.vars.push(VarDef { name: name.into(), lower, upper });
        Var(self.vars.len() - 1)
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> Var {
        let v = self.add_var(name, Some(Rational::zero()), Some(Rational::one()));
        self.binaries.insert(v);
        v
    }

    pub fn constrain(&mut self, name: impl Into<String>, expr: LinExpr, rel: Relation, rhs: Rational) {
        self.constraints.push(Constraint { name: name.into(), expr, rel, rhs });
    }

    pub fn minimize(&mut self, expr: LinExpr) {
        self.sense = Sense::Minimize;
        self.objective = expr;
    }

    pub fn maximize(&mut self, expr: LinExpr) {
        self.sense = Sense::Maximize;
        self.objective = expr;
    }

    pub fn var_by_name(&self, name: &str) -> Option<Var> {
        self.vars.iter().position(|v| v.name == name).map(Var)
    }

    pub(crate) fn check_structure(&self) -> Result<(), LpError> {
        let n = self.vars.len();
        let exprs = self
            .constraints
            .iter()
            .map(|c| (c.name.clone(), &c.expr))
            .chain(core::iter::once((String::from("objective"), &self.objective)));
        for (name, e) in exprs {
            if let Some((v, _)) = e.terms.iter().find(|(v, _)| v.0 >= n) {
                return Err(LpError::UnknownVariable { constraint: name, var: v.0 });
            }
        }
        for b in &self.binaries {
            let def = self.vars.get(b.0).ok_or(LpError::UnknownVariable {
                constraint: String::from("binaries"),
                var: b.0,
            })?;
            let lo_ok = def.lower.as_ref().is_some_and(|l| !l.is_negative());
            let hi_ok = def.upper.as_ref().is_some_and(|u| u <= &Rational::one());
            if !lo_ok || !hi_ok {
                return Err(LpError::BinaryBounds(def.name.clone()));
            }
        }
        Ok(())
    }

    /// Constraints with at least one nonzero coefficient.
    pub(crate) fn nonempty_constraints(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| !c.expr.is_empty())
    }

    /// Empty constraints that do not hold (`0 rel rhs` false).
    pub(crate) fn violated_empty_constraint(&self) -> bool {
        self.constraints
            .iter()
            .filter(|c| c.expr.is_empty())
            .any(|c| !c.rel.holds(&Rational::zero(), &c.rhs))
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, prob: &LpProblem, e: &LinExpr) -> fmt::Result {
    if e.terms.is_empty() {
        return write!(f, " 0");
    }
    for (v, c) in &e.terms {
        let sign = if c.is_negative() { "-" } else { "+" };
        write!(f, " {sign} {} {}", c.abs(), prob.vars[v.0].name)?;
    }
    Ok(())
}

/// Plain-text dump in the usual LP file layout, for debugging.
impl fmt::Display for LpProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", if self.sense == Sense::Minimize { "Minimize" } else { "Maximize" })?;
        write!(f, " obj:")?;
        write_expr(f, self, &self.objective)?;
        writeln!(f)?;
        writeln!(f, "Subject To")?;
        for c in &self.constraints {
            write!(f, " {}:", c.name)?;
            write_expr(f, self, &c.expr)?;
            writeln!(f, " {} {}", c.rel.symbol(), c.rhs)?;
        }
        writeln!(f, "Bounds")?;
        for v in &self.vars {
            let lo = v.lower.as_ref().map_or(String::from("-inf"), |l| format!("{l}"));
            let hi = v.upper.as_ref().map_or(String::from("+inf"), |u| format!("{u}"));
            writeln!(f, " {lo} <= {} <= {hi}", v.name)?;
        }
        if !self.binaries.is_empty() {
            writeln!(f, "Binaries")?;
            for b in &self.binaries {
                writeln!(f, " {}", self.vars[b.0].name)?;
            }
        }
        writeln!(f, "End")
    }
}
