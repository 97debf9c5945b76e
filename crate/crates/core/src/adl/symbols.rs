use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::adl::ast::*;
use crate::diag::Location;
use crate::value::QName;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {reason} `{name}`")]
pub struct ResolutionError {
    pub name: String,
    pub reason: String,
    pub location: Location,
}

/// Resolved model: every unit plus the binding of each subcomponent type
/// reference to a qualified component name.
#[derive(Debug, Clone, Default)]
pub struct SymbolTable {
    units: Vec<CompilationUnit>,
    index: BTreeMap<QName, usize>,
    /// Per unit, per subcomponent (declaration order): resolved type.
    instance_types: Vec<Vec<QName>>,
}

/// One visited behavior embedding, in traversal order.
#[derive(Debug, Clone, Copy)]
pub struct BehaviorNode<'a> {
    pub component: &'a QName,
    pub unit: &'a CompilationUnit,
    pub ty: &'a ComponentType,
    pub embedding: &'a BehaviorEmbedding,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("model contains no components")]
    Empty,
    #[error("several root components: {}", candidates.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))]
    Ambiguous { candidates: Vec<QName> },
    #[error("unknown component `{0}`")]
    Unknown(QName),
}

/// Binds imports and subcomponent type references. All errors are collected.
pub fn resolve_symbols(units: Vec<CompilationUnit>) -> Result<SymbolTable, Vec<ResolutionError>> {
    let mut index = BTreeMap::new();
    for (i, u) in units.iter().enumerate() {
        index.entry(u.qualified_name()).or_insert(i);
    }
    let mut errors = Vec::new();
    let mut instance_types = Vec::with_capacity(units.len());
    for u in &units {
        for imp in &u.imports {
            if !index.contains_key(&imp.name) {
                errors.push(ResolutionError {
                    name: imp.name.to_string(),
                    reason: "unresolved import".into(),
                    location: Location::new(&u.source_path, imp.pos),
                });
            }
        }
        let mut types = Vec::with_capacity(u.component.subcomponents.len());
        for s in &u.component.subcomponents {
            match resolve_type_ref(&index, u, &s.type_ref) {
                Ok(q) => types.push(q),
                Err(reason) => {
                    errors.push(ResolutionError {
                        name: s.type_ref.to_string(),
                        reason,
                        location: Location::new(&u.source_path, s.pos),
                    });
                    types.push(QName::default());
                }
            }
        }
        instance_types.push(types);
    }
    let table = SymbolTable { units, index, instance_types };
    if errors.is_empty() {
        errors.extend(table.containment_cycles());
    }
    if errors.is_empty() {
        Ok(table)
    } else {
        Err(errors)
    }
}

fn resolve_type_ref(index: &BTreeMap<QName, usize>, unit: &CompilationUnit, r: &QName) -> Result<QName, String> {
    if r.is_qualified() {
        return if index.contains_key(r) { Ok(r.clone()) } else { Err("unknown component type".into()) };
    }
    let local = unit.package.child(r.as_str());
    if index.contains_key(&local) {
        return Ok(local);
    }
    let imported: Vec<&Import> = unit.imports.iter().filter(|i| i.name.last() == r.as_str()).collect();
    match imported.as_slice() {
        [one] if index.contains_key(&one.name) => Ok(one.name.clone()),
        [] | [_] => Err("unknown component type".into()),
        _ => Err("ambiguous component type".into()),
    }
}

impl SymbolTable {
    pub fn units(&self) -> &[CompilationUnit] {
        &self.units
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn component_names(&self) -> impl Iterator<Item = &QName> {
        self.index.keys()
    }

    pub fn contains(&self, name: &QName) -> bool {
        self.index.contains_key(name)
    }

    pub fn unit(&self, name: &QName) -> Option<&CompilationUnit> {
        self.index.get(name).map(|&i| &self.units[i])
    }

    pub fn component(&self, name: &QName) -> Option<&ComponentType> {
        self.unit(name).map(|u| &u.component)
    }

    pub(crate) fn units_mut(&mut self) -> &mut [CompilationUnit] {
        &mut self.units
    }

    /// Subcomponents of a component with their resolved types.
    pub fn subcomponents(&self, name: &QName) -> Vec<(&SubcomponentInstance, &QName)> {
        match self.index.get(name) {
            Some(&i) => self.units[i].component.subcomponents.iter().zip(&self.instance_types[i]).collect(),
            None => Vec::new(),
        }
    }

    /// Resolved type of instance `instance` inside component `owner`.
    pub fn instance_type(&self, owner: &QName, instance: &str) -> Option<&QName> {
        let &i = self.index.get(owner)?;
        let idx = self.units[i].component.subcomponents.iter().position(|s| s.name == instance)?;
        Some(&self.instance_types[i][idx])
    }

    /// Components never instantiated by another component, sorted.
    pub fn roots(&self) -> Vec<QName> {
        let used: BTreeSet<&QName> = self.instance_types.iter().flatten().collect();
        self.index.keys().filter(|q| !used.contains(q)).cloned().collect()
    }

    pub fn root(&self) -> Result<QName, RootError> {
        let mut roots = self.roots();
        match roots.len() {
            0 if self.index.is_empty() => Err(RootError::Empty),
            1 => Ok(roots.remove(0)),
            _ => Err(RootError::Ambiguous { candidates: roots }),
        }
    }

    /// Picks `requested` if given (checking it exists), otherwise the unique root.
    pub fn select_root(&self, requested: Option<&QName>) -> Result<QName, RootError> {
        match requested {
            Some(q) if self.contains(q) => Ok(q.clone()),
            Some(q) => Err(RootError::Unknown(q.clone())),
            None => self.root(),
        }
    }

    /// Component types reachable from `root` in depth-first pre-order,
    /// subcomponents in declaration order, each type listed once.
    pub fn component_preorder(&self, root: &QName) -> Vec<QName> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.preorder_into(root, &mut seen, &mut out);
        out
    }

    fn preorder_into(&self, q: &QName, seen: &mut BTreeSet<QName>, out: &mut Vec<QName>) {
        if !self.contains(q) || !seen.insert(q.clone()) {
            return;
        }
        out.push(q.clone());
        for (_, ty) in self.subcomponents(q) {
            self.preorder_into(ty, seen, out);
        }
    }

    /// Behavior embeddings met by a pre-order walk from `root`.
    pub fn behavior_nodes(&self, root: &QName) -> Vec<BehaviorNode<'_>> {
        self.component_preorder(root)
            .into_iter()
            .filter_map(|q| {
                let &i = self.index.get(&q)?;
                let (component, _) = self.index.get_key_value(&q)?;
                let unit = &self.units[i];
                let embedding = unit.component.behavior()?;
                Some(BehaviorNode { component, unit, ty: &unit.component, embedding })
            })
            .collect()
    }

    fn containment_cycles(&self) -> Vec<ResolutionError> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Fresh,
            Active,
            Done,
        }
        fn visit(t: &SymbolTable, i: usize, marks: &mut [Mark], errors: &mut Vec<ResolutionError>) {
            marks[i] = Mark::Active;
            let u = &t.units[i];
            for (s, ty) in u.component.subcomponents.iter().zip(&t.instance_types[i]) {
                let Some(&j) = t.index.get(ty) else { continue };
                match marks[j] {
                    Mark::Active => errors.push(ResolutionError {
                        name: ty.to_string(),
                        reason: "cyclic containment through".into(),
                        location: Location::new(&u.source_path, s.pos),
                    }),
                    Mark::Fresh => visit(t, j, marks, errors),
                    Mark::Done => {}
                }
            }
            marks[i] = Mark::Done;
        }
        let mut marks = vec![Mark::Fresh; self.units.len()];
        let mut errors = Vec::new();
        for &i in self.index.values() {
            if marks[i] == Mark::Fresh {
                visit(self, i, &mut marks, &mut errors);
            }
        }
        errors
    }
}
