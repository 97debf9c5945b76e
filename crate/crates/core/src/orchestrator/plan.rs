use std::collections::{BTreeMap, BTreeSet};

use crate::adl::SymbolTable;
use crate::generator::{responsible_generator, GeneratorDescriptor, GeneratorKind, GeneratorRegistry};
use crate::orchestrator::config::ApplicationConfig;
use crate::orchestrator::error::CompositionError;
use crate::value::QName;

/// Result of a successful composition check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionPlan {
    pub application: String,
    pub root: QName,
    pub runtime_id: QName,
    pub instantiation_order: Vec<String>,
    pub component_generator: String,
    pub factory_generator: Option<String>,
    /// Canonical behavior language id → responsible behavior generator.
    pub dispatch_table: BTreeMap<String, String>,
    /// Keys available to generators: application context plus every
    /// selected generator's `provides`.
    pub provided_keys: BTreeSet<String>,
}

/// Checks that the configured generators compose for the model rooted at
/// `root` and computes their execution order. All detectable errors are
/// reported together.
pub fn check_composition(
    config: &ApplicationConfig,
    registry: &GeneratorRegistry,
    model: &SymbolTable,
    root: &QName,
) -> Result<ExecutionPlan, Vec<CompositionError>> {
    let mut errors = Vec::new();

    // Names resolve to generators of the kind their clause expects.
    let mut resolve = |name: &String, expected: GeneratorKind| -> Option<&GeneratorDescriptor> {
        match registry.descriptor(name) {
            None => {
                errors.push(CompositionError::UnknownGenerator { name: name.clone(), reason: String::new() });
                None
            }
            Some(d) if d.kind() != Some(expected) => {
                errors.push(CompositionError::UnknownGenerator {
                    name: name.clone(),
                    reason: format!("it is not a {expected} generator"),
                });
                None
            }
            Some(d) => Some(d),
        }
    };
    let component = config.component_generator.as_ref().and_then(|n| resolve(n, GeneratorKind::Component));
    let factory = config.factory_generator.as_ref().and_then(|n| resolve(n, GeneratorKind::Factory));
    let behaviors: Vec<&GeneratorDescriptor> =
        config.behavior_generators.iter().filter_map(|n| resolve(n, GeneratorKind::Behavior)).collect();
    if config.component_generator.is_none() {
        errors.push(CompositionError::MissingComponentGenerator);
    }
    let mut selected: Vec<&GeneratorDescriptor> = component.into_iter().chain(factory).chain(behaviors.iter().copied()).collect();
    selected.sort_by(|a, b| a.name.cmp(&b.name));
    selected.dedup_by(|a, b| a.name == b.name);

    // One runtime.
    let runtimes: BTreeSet<&QName> = selected.iter().map(|d| &d.runtime).collect();
    if runtimes.len() > 1 {
        errors.push(CompositionError::RuntimeMismatch {
            names: selected.iter().map(|d| format!("{} ({})", d.name, d.runtime)).collect(),
        });
    }

    // Responsibility for every behavior language in the model.
    let nodes = model.behavior_nodes(root);
    let languages = registry.languages();
    let canonical = |id: &str| languages.canonical(id).unwrap_or(id).to_string();
    let used: BTreeSet<String> = nodes.iter().map(|n| canonical(&n.embedding.language)).collect();
    let behavior_names: Vec<String> = behaviors.iter().map(|d| d.name.clone()).collect();
    let mut dispatch_table = BTreeMap::new();
    for lang in &used {
        match responsible_generator(registry, &behavior_names, lang) {
            Ok(d) => {
                dispatch_table.insert(lang.clone(), d.name.clone());
            }
            Err(e) => errors.push(e),
        }
    }

    // Required keys.
    let context_keys: BTreeSet<String> = config.context.keys().cloned().collect();
    let mut provided_keys = context_keys.clone();
    for d in &selected {
        provided_keys.extend(d.provides.iter().cloned());
    }
    for d in &selected {
        for key in &d.requires {
            let by_other = selected.iter().any(|p| p.name != d.name && p.provides.contains(key));
            if !context_keys.contains(key) && !by_other {
                errors.push(CompositionError::UnsatisfiedRequire { key: key.clone(), requirer: d.name.clone() });
            }
        }
    }

    // Generator-specific constraint sets on the models each generator will see.
    for d in &selected {
        if d.constraints.is_empty() {
            continue;
        }
        for node in &nodes {
            let lang = canonical(&node.embedding.language);
            if d.kind() == Some(GeneratorKind::Behavior) && dispatch_table.get(&lang) != Some(&d.name) {
                continue;
            }
            let Some(parsed) = &node.embedding.parsed else { continue };
            for set in &d.constraints {
                for v in languages.check_constraint(set, parsed, node.ty).unwrap_or_default() {
                    let located = v.locate(&node.unit.source_path, node.embedding.body_pos);
                    errors.push(CompositionError::ConstraintViolation {
                        set: set.clone(),
                        generator: d.name.clone(),
                        location: located.location,
                        message: format!("{} {}", located.id, located.message),
                    });
                }
            }
        }
    }

    if !errors.is_empty() {
        return Err(errors);
    }
    let order = compute_execution_order(&selected, &context_keys).map_err(|e| vec![e])?;
    let component = component.expect("no errors implies a component generator");
    Ok(ExecutionPlan {
        application: config.name.clone(),
        root: root.clone(),
        runtime_id: component.runtime.clone(),
        instantiation_order: order,
        component_generator: component.name.clone(),
        factory_generator: factory.map(|f| f.name.clone()),
        dispatch_table,
        provided_keys,
    })
}

/// Edges `(before, after)` of the generator dependency graph.
pub fn dependency_edges(descriptors: &[&GeneratorDescriptor], context_keys: &BTreeSet<String>) -> BTreeSet<(String, String)> {
    let mut edges = BTreeSet::new();
    for r in descriptors {
        for key in r.requires.iter().filter(|k| !context_keys.contains(*k)) {
            for p in descriptors.iter().filter(|p| p.name != r.name && p.provides.contains(key)) {
                edges.insert((p.name.clone(), r.name.clone()));
            }
        }
    }
    for c in descriptors.iter().filter(|d| d.kind() == Some(GeneratorKind::Component)) {
        for other in descriptors {
            if matches!(other.kind(), Some(GeneratorKind::Behavior | GeneratorKind::Factory)) {
                edges.insert((other.name.clone(), c.name.clone()));
            }
        }
    }
    edges
}

/// Topological order that always picks the ready generator with the
/// lexicographically smallest name.
pub fn compute_execution_order(
    descriptors: &[&GeneratorDescriptor],
    context_keys: &BTreeSet<String>,
) -> Result<Vec<String>, CompositionError> {
    let edges = dependency_edges(descriptors, context_keys);
    let nodes: BTreeSet<&str> = descriptors.iter().map(|d| d.name.as_str()).collect();
    let mut indegree: BTreeMap<&str, usize> = nodes.iter().map(|n| (*n, 0)).collect();
    let mut succ: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (a, b) in &edges {
        *indegree.get_mut(b.as_str()).expect("edge endpoints are nodes") += 1;
        succ.entry(a).or_default().push(b);
    }
    let mut ready: BTreeSet<&str> = indegree.iter().filter(|(_, d)| **d == 0).map(|(n, _)| *n).collect();
    let mut order = Vec::with_capacity(nodes.len());
    while let Some(n) = ready.pop_first() {
        order.push(n.to_string());
        for m in succ.get(n).into_iter().flatten() {
            let d = indegree.get_mut(m).expect("edge endpoints are nodes");
            *d -= 1;
            if *d == 0 {
                ready.insert(m);
            }
        }
    }
    if order.len() < nodes.len() {
        let placed: BTreeSet<&str> = order.iter().map(String::as_str).collect();
        let remaining: BTreeSet<&str> = nodes.difference(&placed).copied().collect();
        return Err(CompositionError::DependencyCycle { names: find_cycle(&remaining, &edges) });
    }
    let index: BTreeMap<&str, usize> = order.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    for (a, b) in &edges {
        assert!(index[a.as_str()] < index[b.as_str()], "order violates edge {a} -> {b}");
    }
    Ok(order)
}

/// Every node left after topological sorting has a predecessor among the
/// remaining ones, so walking predecessors must revisit a node.
fn find_cycle(remaining: &BTreeSet<&str>, edges: &BTreeSet<(String, String)>) -> Vec<String> {
    let pred = |n: &str| {
        edges
            .iter()
            .filter(|(a, b)| b == n && remaining.contains(a.as_str()))
            .map(|(a, _)| a.clone())
            .min()
            .expect("remaining nodes have remaining predecessors")
    };
    let mut path: Vec<String> = vec![remaining.first().expect("non-empty").to_string()];
    loop {
        let p = pred(path.last().expect("non-empty"));
        if let Some(i) = path.iter().position(|x| *x == p) {
            let mut cycle: Vec<String> = path.split_off(i);
            cycle.reverse();
            let start = cycle.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)).map(|(i, _)| i).expect("non-empty");
            cycle.rotate_left(start);
            return cycle;
        }
        path.push(p);
    }
}
