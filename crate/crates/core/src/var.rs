//! Variables and the per-instance variable pool.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// A variable: dense ordinal plus its name.
///
/// Ordering is by index first, which fixes the column order of the simplex
/// and the print order of terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    index: u32,
    name: Arc<str>,
}

impl VarId {
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.name, self.index)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Name <-> index registry. Every variable of one instance must come from
/// the same pool.
#[derive(Clone, Debug, Default)]
pub struct VarPool {
    vars: Vec<VarId>,
    by_name: HashMap<Arc<str>, u32>,
    fresh_counter: usize,
}

impl VarPool {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the variable called `name`, registering it on first use.
    pub fn var(&mut self, name: &str) -> VarId {
        if let Some(&i) = self.by_name.get(name) {
            return self.vars[i as usize].clone();
        }
        let index = u32::try_from(self.vars.len()).expect("variable pool overflow");
        let name: Arc<str> = Arc::from(name);
        let v = VarId {
            index,
            name: name.clone(),
        };
        self.by_name.insert(name, index);
        self.vars.push(v.clone());
        v
    }

    /// A new variable whose name (`{prefix}_{n}`) is not yet in the pool.
    pub fn fresh(&mut self, prefix: &str) -> VarId {
        loop {
            self.fresh_counter += 1;
            let name = format!("{prefix}_{}", self.fresh_counter);
            if !self.by_name.contains_key(name.as_str()) {
                return self.var(&name);
            }
        }
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).map(|&i| self.vars[i as usize].clone())
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &VarId> {
        self.vars.iter()
    }
}
