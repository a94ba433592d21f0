use std::collections::{BTreeMap, HashMap};

use crate::error::ModelError;

/// Handle to a registered decision variable.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarRef(pub(crate) u32);

impl VarRef {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Binary,
}

#[derive(Debug, Clone)]
pub struct VarDef {
    pub name: String,
    pub kind: VarKind,
    pub lo: f64,
    pub hi: f64,
}

/// Sparse linear expression plus a constant term.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinExpr {
    terms: BTreeMap<VarRef, f64>,
    pub constant: f64,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(var: VarRef, coeff: f64) -> Self {
        let mut e = Self::new();
        e.add_term(var, coeff);
        e
    }

    /// Accumulate `coeff * var`; entries cancelling to zero are dropped.
    pub fn add_term(&mut self, var: VarRef, coeff: f64) -> &mut Self {
        let entry = self.terms.entry(var).or_insert(0.0);
        *entry += coeff;
        if *entry == 0.0 {
            self.terms.remove(&var);
        }
        self
    }

    pub fn add_constant(&mut self, value: f64) -> &mut Self {
        self.constant += value;
        self
    }

    pub fn add_expr(&mut self, other: &LinExpr, factor: f64) -> &mut Self {
        for (&v, &c) in &other.terms {
            self.add_term(v, factor * c);
        }
        self.constant += factor * other.constant;
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarRef, f64)> + '_ {
        self.terms.iter().map(|(&v, &c)| (v, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, var: VarRef) -> f64 {
        self.terms.get(&var).copied().unwrap_or(0.0)
    }
}

impl FromIterator<(VarRef, f64)> for LinExpr {
    fn from_iter<T: IntoIterator<Item = (VarRef, f64)>>(iter: T) -> Self {
        let mut e = LinExpr::new();
        for (v, c) in iter {
            e.add_term(v, c);
        }
        e
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relop {
    Le,
    Eq,
    Ge,
}

impl Relop {
    pub fn symbol(self) -> &'static str {
        match self {
            Relop::Le => "<=",
            Relop::Eq => "=",
            Relop::Ge => ">=",
        }
    }
}

pub type ConstraintId = usize;

#[derive(Debug, Clone)]
pub struct Constraint {
    pub name: String,
    pub expr: LinExpr,
    pub op: Relop,
    pub rhs: f64,
    /// Free-form tag used to group constraints in diagnostics.
    pub group: String,
}

/// Variable/constraint counts of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelStats {
    pub continuous: usize,
    pub binaries: usize,
    pub constraints: usize,
}

/// A mixed-integer linear program: variables, linear constraints and a
/// minimization objective. Insertion order is preserved in serialization, so
/// identical build sequences give byte-identical files.
#[derive(Debug, Clone)]
pub struct MilpModel {
    name: String,
    vars: Vec<VarDef>,
    by_name: HashMap<String, VarRef>,
    constraints: Vec<Constraint>,
    constraint_names: std::collections::HashSet<String>,
    objective: LinExpr,
    diagnostics: Vec<String>,
}

pub const MAX_NAME_LEN: usize = 255;

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name.len() <= MAX_NAME_LEN
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !name.starts_with(|c: char| c.is_ascii_digit())
}

impl MilpModel {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            vars: Vec::new(),
            by_name: HashMap::new(),
            constraints: Vec::new(),
            constraint_names: std::collections::HashSet::new(),
            objective: LinExpr::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        kind: VarKind,
        lo: f64,
        hi: f64,
    ) -> Result<VarRef, ModelError> {
        let name = name.into();
        if !valid_name(&name) {
            return Err(ModelError::BadName(name));
        }
        if self.by_name.contains_key(&name) {
            return Err(ModelError::DuplicateName(name));
        }
        if !(lo <= hi) {
            return Err(ModelError::BadBounds { name, lo, hi });
        }
        if kind == VarKind::Binary && (lo < 0.0 || hi > 1.0) {
            return Err(ModelError::BadBounds { name, lo, hi });
        }
        let r = VarRef(self.vars.len() as u32);
        self.by_name.insert(name.clone(), r);
        self.vars.push(VarDef { name, kind, lo, hi });
        Ok(r)
    }

    pub fn add_continuous(
        &mut self,
        name: impl Into<String>,
        lo: f64,
        hi: f64,
    ) -> Result<VarRef, ModelError> {
        self.add_var(name, VarKind::Continuous, lo, hi)
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> Result<VarRef, ModelError> {
        self.add_var(name, VarKind::Binary, 0.0, 1.0)
    }

    fn check_expr(&self, expr: &LinExpr) -> Result<(), ModelError> {
        for (v, _) in expr.iter() {
            if v.index() >= self.vars.len() {
                return Err(ModelError::UnknownVar(v.index()));
            }
        }
        Ok(())
    }

    /// Add `expr op rhs`. A constant in the expression is folded into the
    /// right-hand side. An empty expression is accepted as vacuous and noted
    /// in the diagnostics.
    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        expr: LinExpr,
        op: Relop,
        rhs: f64,
    ) -> Result<ConstraintId, ModelError> {
        self.add_constraint_in_group(name, "", expr, op, rhs)
    }

    pub fn add_constraint_in_group(
        &mut self,
        name: impl Into<String>,
        group: impl Into<String>,
        mut expr: LinExpr,
        op: Relop,
        rhs: f64,
    ) -> Result<ConstraintId, ModelError> {
        let name = name.into();
        if !valid_name(&name) {
            return Err(ModelError::BadName(name));
        }
        if !self.constraint_names.insert(name.clone()) {
            return Err(ModelError::DuplicateName(name));
        }
        self.check_expr(&expr)?;
        let rhs = rhs - expr.constant;
        expr.constant = 0.0;
        if expr.is_empty() {
            self.diagnostics
                .push(format!("constraint {name} has an empty expression"));
        }
        let id = self.constraints.len();
        self.constraints.push(Constraint {
            name,
            expr,
            op,
            rhs,
            group: group.into(),
        });
        Ok(id)
    }

    pub fn set_objective(&mut self, expr: LinExpr) -> Result<(), ModelError> {
        self.check_expr(&expr)?;
        self.objective = expr;
        Ok(())
    }

    pub fn objective(&self) -> &LinExpr {
        &self.objective
    }

    pub fn var(&self, r: VarRef) -> &VarDef {
        &self.vars[r.index()]
    }

    pub fn vars(&self) -> impl Iterator<Item = (VarRef, &VarDef)> {
        self.vars
            .iter()
            .enumerate()
            .map(|(i, d)| (VarRef(i as u32), d))
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarRef> {
        self.by_name.get(name).copied()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn diagnostics(&self) -> &[String] {
        &self.diagnostics
    }

    /// Overwrite a variable's bounds, e.g. to pin binaries in enumeration
    /// oracles or to fix initial states.
    pub fn set_bounds(&mut self, r: VarRef, lo: f64, hi: f64) -> Result<(), ModelError> {
        if r.index() >= self.vars.len() {
            return Err(ModelError::UnknownVar(r.index()));
        }
        if !(lo <= hi) {
            return Err(ModelError::BadBounds {
                name: self.vars[r.index()].name.clone(),
                lo,
                hi,
            });
        }
        self.vars[r.index()].lo = lo;
        self.vars[r.index()].hi = hi;
        Ok(())
    }

    /// Add `coeff * var` to an existing constraint's expression (used by the
    /// elastic relaxation).
    pub(crate) fn constraint_expr_add(&mut self, id: ConstraintId, var: VarRef, coeff: f64) {
        self.constraints[id].expr.add_term(var, coeff);
    }

    pub fn stats(&self) -> ModelStats {
        let binaries = self
            .vars
            .iter()
            .filter(|v| v.kind == VarKind::Binary)
            .count();
        ModelStats {
            continuous: self.vars.len() - binaries,
            binaries,
            constraints: self.constraints.len(),
        }
    }
}
