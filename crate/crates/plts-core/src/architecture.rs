//! Distributed architectures: processes wired by proposition sets, the
//! color extension `A^r`, the scheduling lift `A*`, and information-fork
//! detection.
//!
//! An architecture names an environment process (outputs only) and a
//! list of system processes, each with input and output proposition
//! sets. Output sets are pairwise disjoint and every input must be
//! produced by some process. Processes form a graph: `q` has an edge to
//! `p` labeled `O_q ∩ I_p` whenever that set is nonempty.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArchError {
    #[error("duplicate process name `{0}`")]
    DuplicateProcess(String),
    #[error("outputs not disjoint: `{prop}` is output by both `{first}` and `{second}`")]
    OutputsNotDisjoint { prop: String, first: String, second: String },
    #[error("dangling input: `{prop}` read by `{process}` is output by no process")]
    DanglingInput { prop: String, process: String },
    #[error("proposition `{0}` is not a valid identifier")]
    BadPropName(String),
    #[error("name collision: `{0}` already used")]
    NameCollision(String),
    #[error("unknown process `{0}`")]
    UnknownProcess(String),
}

/// A system process with its visible inputs and owned outputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Process {
    pub name: String,
    pub inputs: BTreeSet<String>,
    pub outputs: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct EnvSpec {
    name: String,
    outputs: BTreeSet<String>,
}

/// Architecture `⟨P, p_env, {I_p}, {O_p}⟩` with `I_env = ∅`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ArchJson", into = "ArchJson")]
pub struct Architecture {
    env_name: String,
    env_outputs: BTreeSet<String>,
    processes: Vec<Process>,
}

/// On-disk shape: `{ "env": {...}, "processes": [...] }`.
#[derive(Serialize, Deserialize)]
struct ArchJson {
    env: EnvSpec,
    processes: Vec<Process>,
}

impl From<Architecture> for ArchJson {
    fn from(a: Architecture) -> ArchJson {
        ArchJson {
            env: EnvSpec { name: a.env_name, outputs: a.env_outputs },
            processes: a.processes,
        }
    }
}

impl TryFrom<ArchJson> for Architecture {
    type Error = ArchError;
    fn try_from(j: ArchJson) -> Result<Architecture, ArchError> {
        let a = Architecture {
            env_name: j.env.name,
            env_outputs: j.env.outputs,
            processes: j.processes,
        };
        a.validate()?;
        Ok(a)
    }
}

fn valid_prop_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Architecture {
    pub fn new(
        env_name: impl Into<String>,
        env_outputs: impl IntoIterator<Item = impl Into<String>>,
        processes: Vec<Process>,
    ) -> Result<Architecture, ArchError> {
        let a = Architecture {
            env_name: env_name.into(),
            env_outputs: env_outputs.into_iter().map(Into::into).collect(),
            processes,
        };
        a.validate()?;
        Ok(a)
    }

    pub fn env_name(&self) -> &str {
        &self.env_name
    }

    pub fn env_outputs(&self) -> &BTreeSet<String> {
        &self.env_outputs
    }

    /// System processes (`P⁻`), in declaration order.
    pub fn system_processes(&self) -> &[Process] {
        &self.processes
    }

    pub fn process(&self, name: &str) -> Result<&Process, ArchError> {
        self.processes
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| ArchError::UnknownProcess(name.to_string()))
    }

    /// All process names including the environment.
    pub fn all_names(&self) -> Vec<&str> {
        std::iter::once(self.env_name.as_str())
            .chain(self.processes.iter().map(|p| p.name.as_str()))
            .collect()
    }

    /// Output set of a process (env included).
    pub fn outputs_of(&self, name: &str) -> Option<&BTreeSet<String>> {
        if name == self.env_name {
            Some(&self.env_outputs)
        } else {
            self.processes.iter().find(|p| p.name == name).map(|p| &p.outputs)
        }
    }

    /// Input set of a process (env has none).
    pub fn inputs_of(&self, name: &str) -> Option<BTreeSet<String>> {
        if name == self.env_name {
            Some(BTreeSet::new())
        } else {
            self.processes.iter().find(|p| p.name == name).map(|p| p.inputs.clone())
        }
    }

    /// Union of all outputs (environment included).
    pub fn all_outputs(&self) -> BTreeSet<String> {
        let mut out = self.env_outputs.clone();
        for p in &self.processes {
            out.extend(p.outputs.iter().cloned());
        }
        out
    }

    /// Union of system-process outputs.
    pub fn system_outputs(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for p in &self.processes {
            out.extend(p.outputs.iter().cloned());
        }
        out
    }

    /// Checks the three architecture conditions plus name hygiene.
    pub fn validate(&self) -> Result<(), ArchError> {
        let mut names = BTreeSet::new();
        for n in self.all_names() {
            if !names.insert(n.to_string()) {
                return Err(ArchError::DuplicateProcess(n.to_string()));
            }
        }
        for prop in self.all_outputs().iter().chain(
            self.processes.iter().flat_map(|p| p.inputs.iter()),
        ) {
            if !valid_prop_name(prop) {
                return Err(ArchError::BadPropName(prop.clone()));
            }
        }
        // Outputs pairwise disjoint.
        let mut owner: BTreeMap<&str, &str> = BTreeMap::new();
        for name in self.all_names() {
            for prop in self.outputs_of(name).unwrap() {
                if let Some(first) = owner.insert(prop.as_str(), name) {
                    return Err(ArchError::OutputsNotDisjoint {
                        prop: prop.clone(),
                        first: first.to_string(),
                        second: name.to_string(),
                    });
                }
            }
        }
        // Every input originates from some process.
        for p in &self.processes {
            for prop in &p.inputs {
                if !owner.contains_key(prop.as_str()) {
                    return Err(ArchError::DanglingInput {
                        prop: prop.clone(),
                        process: p.name.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// `A^r`: adds the color process `p_<r>` with no inputs and output `{r}`.
    pub fn color_extend(&self, r: &str) -> Result<Architecture, ArchError> {
        if !valid_prop_name(r) {
            return Err(ArchError::BadPropName(r.to_string()));
        }
        if self.all_outputs().contains(r)
            || self.processes.iter().any(|p| p.inputs.contains(r))
        {
            return Err(ArchError::NameCollision(r.to_string()));
        }
        let pname = format!("p_{r}");
        if self.all_names().contains(&pname.as_str()) {
            return Err(ArchError::NameCollision(pname));
        }
        let mut processes = self.processes.clone();
        processes.push(Process {
            name: pname,
            inputs: BTreeSet::new(),
            outputs: BTreeSet::from([r.to_string()]),
        });
        let out = Architecture {
            env_name: self.env_name.clone(),
            env_outputs: self.env_outputs.clone(),
            processes,
        };
        out.validate()?;
        Ok(out)
    }

    /// Scheduling proposition name for a process.
    pub fn sched_prop(process: &str) -> String {
        format!("sched_{process}")
    }

    /// `A*`: the environment additionally outputs `sched_p` for every
    /// system process `p`, and each `p` reads its own scheduling bit.
    pub fn async_lift(&self) -> Result<Architecture, ArchError> {
        let mut env_outputs = self.env_outputs.clone();
        let mut processes = self.processes.clone();
        for p in &mut processes {
            let sp = Architecture::sched_prop(&p.name);
            if self.all_outputs().contains(&sp)
                || self.processes.iter().any(|q| q.inputs.contains(&sp))
            {
                return Err(ArchError::NameCollision(sp));
            }
            env_outputs.insert(sp.clone());
            p.inputs.insert(sp);
        }
        let out = Architecture {
            env_name: self.env_name.clone(),
            env_outputs,
            processes,
        };
        out.validate()?;
        Ok(out)
    }

    /// Whether every system process already reads a scheduling bit that
    /// the environment outputs (i.e. the architecture looks lifted).
    pub fn is_async_lifted(&self) -> bool {
        !self.processes.is_empty()
            && self.processes.iter().all(|p| {
                let sp = Architecture::sched_prop(&p.name);
                self.env_outputs.contains(&sp) && p.inputs.contains(&sp)
            })
    }
}

/// An information fork `⟨P′, V′, p, p′⟩` witnessing undecidability of
/// full distributed synthesis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InformationFork {
    pub proc_subset: BTreeSet<String>,
    pub var_subset: BTreeSet<String>,
    pub p: String,
    pub p_prime: String,
}

/// Does `tuple` satisfy the fork definition in `a`? Used both by the
/// search and as an independent re-verification entry point.
pub fn is_information_fork(a: &Architecture, fork: &InformationFork) -> bool {
    let InformationFork { proc_subset: p_set, var_subset: v_set, p, p_prime } = fork;
    if p == p_prime {
        return false;
    }
    // p, p′ are system processes outside P′.
    let sys_names: BTreeSet<&str> = a.system_processes().iter().map(|q| q.name.as_str()).collect();
    if !sys_names.contains(p.as_str()) || !sys_names.contains(p_prime.as_str()) {
        return false;
    }
    if p_set.contains(p) || p_set.contains(p_prime) {
        return false;
    }
    if !p_set.iter().all(|q| a.all_names().contains(&q.as_str())) {
        return false;
    }
    // V′ disjoint from I_p ∪ I_p′.
    let i_p = a.inputs_of(p).unwrap();
    let i_pp = a.inputs_of(p_prime).unwrap();
    if v_set.iter().any(|v| i_p.contains(v) || i_pp.contains(v)) {
        return false;
    }
    // P′ with the V′-labeled edges forms a subgraph rooted in the
    // environment: env ∈ P′ and every member is reachable from env via
    // edges (inside P′) carrying at least one V′ variable.
    if !p_set.contains(a.env_name()) {
        return false;
    }
    let mut reached: BTreeSet<&str> = BTreeSet::from([a.env_name()]);
    let mut frontier = vec![a.env_name()];
    while let Some(q) = frontier.pop() {
        let outs = a.outputs_of(q).unwrap();
        for target in p_set.iter() {
            if reached.contains(target.as_str()) {
                continue;
            }
            let t_inputs = a.inputs_of(target).unwrap();
            let edge_label: BTreeSet<&String> = outs.iter().filter(|o| t_inputs.contains(*o)).collect();
            if edge_label.iter().any(|l| v_set.contains(*l)) {
                reached.insert(target.as_str());
                frontier.push(target.as_str());
            }
        }
    }
    if !p_set.iter().all(|q| reached.contains(q.as_str())) {
        return false;
    }
    // Two P′ nodes with edges to p and p′ and asymmetric information:
    // O_{q,p} ⊄ I_p′ and O_{q′,p′} ⊄ I_p.
    let has_edge = |from: &str, to: &str| -> bool {
        let outs = a.outputs_of(from).unwrap();
        let ins = a.inputs_of(to).unwrap();
        outs.iter().any(|o| ins.contains(o))
    };
    let union_outputs = |x: &str, y: &str| -> BTreeSet<String> {
        let mut o = a.outputs_of(x).unwrap().clone();
        o.extend(a.outputs_of(y).unwrap().iter().cloned());
        o
    };
    let q_ok = p_set.iter().any(|q| {
        has_edge(q, p) && !union_outputs(q, p).is_subset(&i_pp)
    });
    let qp_ok = p_set.iter().any(|q| {
        has_edge(q, p_prime) && !union_outputs(q, p_prime).is_subset(&i_p)
    });
    q_ok && qp_ok
}

/// Searches for an information fork; `None` means the architecture is
/// weakly ordered.
///
/// Enumerates ordered pairs of distinct system processes, subsets `P′`
/// of the remaining processes containing the environment, and subsets
/// `V′` of variables on `P′`-internal edges. Exponential; fine at desk
/// scale.
pub fn find_information_fork(a: &Architecture) -> Option<InformationFork> {
    let sys: Vec<&str> = a.system_processes().iter().map(|p| p.name.as_str()).collect();
    for p in &sys {
        for p_prime in &sys {
            if p == p_prime {
                continue;
            }
            let others: Vec<&str> = a
                .all_names()
                .into_iter()
                .filter(|n| n != &a.env_name() && n != p && n != p_prime)
                .collect();
            // P′ = {env} ∪ (subset of others).
            for mask in 0u32..(1 << others.len()) {
                let mut p_set: BTreeSet<String> = BTreeSet::from([a.env_name().to_string()]);
                for (i, o) in others.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        p_set.insert(o.to_string());
                    }
                }
                // Candidate V′ variables: on P′-internal edges, outside
                // I_p ∪ I_p′.
                let i_p = a.inputs_of(p).unwrap();
                let i_pp = a.inputs_of(p_prime).unwrap();
                let mut edge_vars: BTreeSet<String> = BTreeSet::new();
                for from in &p_set {
                    for to in &p_set {
                        if from == to {
                            continue;
                        }
                        let outs = a.outputs_of(from).unwrap();
                        let ins = a.inputs_of(to).unwrap();
                        for v in outs.iter().filter(|o| ins.contains(*o)) {
                            if !i_p.contains(v) && !i_pp.contains(v) {
                                edge_vars.insert(v.clone());
                            }
                        }
                    }
                }
                let edge_vars: Vec<String> = edge_vars.into_iter().collect();
                for vmask in 0u32..(1 << edge_vars.len()) {
                    let v_set: BTreeSet<String> = edge_vars
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| vmask & (1 << i) != 0)
                        .map(|(_, v)| v.clone())
                        .collect();
                    let fork = InformationFork {
                        proc_subset: p_set.clone(),
                        var_subset: v_set,
                        p: p.to_string(),
                        p_prime: p_prime.to_string(),
                    };
                    if is_information_fork(a, &fork) {
                        return Some(fork);
                    }
                }
            }
        }
    }
    None
}

/// Weakly ordered = no information fork.
pub fn is_weakly_ordered(a: &Architecture) -> bool {
    find_information_fork(a).is_none()
}

/// The two-process architecture with independent channels
/// (env outputs `{a,b}`; `p1: a→c`; `p2: b→d`).
pub fn example_independent() -> Architecture {
    Architecture::new(
        "p_env",
        ["a", "b"],
        vec![
            Process {
                name: "p1".into(),
                inputs: BTreeSet::from(["a".into()]),
                outputs: BTreeSet::from(["c".into()]),
            },
            Process {
                name: "p2".into(),
                inputs: BTreeSet::from(["b".into()]),
                outputs: BTreeSet::from(["d".into()]),
            },
        ],
    )
    .unwrap()
}

/// The two-process pipeline (env → p1 → p2).
pub fn example_pipeline() -> Architecture {
    Architecture::new(
        "p_env",
        ["a"],
        vec![
            Process {
                name: "p1".into(),
                inputs: BTreeSet::from(["a".into()]),
                outputs: BTreeSet::from(["b".into()]),
            },
            Process {
                name: "p2".into(),
                inputs: BTreeSet::from(["b".into()]),
                outputs: BTreeSet::from(["c".into()]),
            },
        ],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_accepts_the_independent_architecture() {
        example_independent().validate().unwrap();
        example_pipeline().validate().unwrap();
    }

    #[test]
    fn validate_rejects_shared_outputs() {
        let err = Architecture::new(
            "env",
            ["a"],
            vec![
                Process {
                    name: "p1".into(),
                    inputs: BTreeSet::from(["a".into()]),
                    outputs: BTreeSet::from(["c".into()]),
                },
                Process {
                    name: "p2".into(),
                    inputs: BTreeSet::from(["a".into()]),
                    outputs: BTreeSet::from(["c".into()]),
                },
            ],
        )
        .unwrap_err();
        assert!(matches!(err, ArchError::OutputsNotDisjoint { .. }));
    }

    #[test]
    fn validate_rejects_dangling_inputs() {
        let err = Architecture::new(
            "env",
            ["a"],
            vec![Process {
                name: "p1".into(),
                inputs: BTreeSet::from(["x".into()]),
                outputs: BTreeSet::from(["c".into()]),
            }],
        )
        .unwrap_err();
        assert_eq!(
            err,
            ArchError::DanglingInput { prop: "x".into(), process: "p1".into() }
        );
    }

    #[test]
    fn color_extension_adds_an_output_only_process() {
        let a = example_independent();
        let ar = a.color_extend("r").unwrap();
        ar.validate().unwrap();
        assert_eq!(ar.system_processes().len(), 3);
        let pr = ar.process("p_r").unwrap();
        assert!(pr.inputs.is_empty());
        assert_eq!(pr.outputs, BTreeSet::from(["r".to_string()]));
        // Two distinct colors stack.
        let arr = ar.color_extend("r_prime").unwrap();
        arr.validate().unwrap();
        assert_eq!(arr.system_processes().len(), 4);
        // Collision is rejected.
        assert!(ar.color_extend("r").is_err());
        assert!(a.color_extend("a").is_err());
    }

    #[test]
    fn async_lift_adds_scheduling_bits() {
        let a = example_independent().async_lift().unwrap();
        a.validate().unwrap();
        assert_eq!(
            a.env_outputs(),
            &BTreeSet::from([
                "a".to_string(),
                "b".to_string(),
                "sched_p1".to_string(),
                "sched_p2".to_string()
            ])
        );
        assert_eq!(
            a.process("p1").unwrap().inputs,
            BTreeSet::from(["a".to_string(), "sched_p1".to_string()])
        );
        assert!(a.is_async_lifted());
        assert!(!example_independent().is_async_lifted());
        // Lifting twice collides.
        assert!(a.async_lift().is_err());
    }

    #[test]
    fn independent_architecture_has_the_env_fork() {
        let fork = find_information_fork(&example_independent()).expect("fork expected");
        assert_eq!(fork.proc_subset, BTreeSet::from(["p_env".to_string()]));
        assert_eq!(fork.var_subset, BTreeSet::new());
        assert_eq!((fork.p.as_str(), fork.p_prime.as_str()), ("p1", "p2"));
        assert!(is_information_fork(&example_independent(), &fork));
        assert!(!is_weakly_ordered(&example_independent()));
    }

    #[test]
    fn pipeline_is_weakly_ordered() {
        assert_eq!(find_information_fork(&example_pipeline()), None);
        assert!(is_weakly_ordered(&example_pipeline()));
    }

    #[test]
    fn single_process_has_no_fork() {
        let a = Architecture::new(
            "env",
            ["a"],
            vec![Process {
                name: "p".into(),
                inputs: BTreeSet::from(["a".into()]),
                outputs: BTreeSet::from(["o".into()]),
            }],
        )
        .unwrap();
        assert!(is_weakly_ordered(&a));
    }

    #[test]
    fn fork_preserved_by_color_extension() {
        for a in [example_independent(), example_pipeline()] {
            let before = find_information_fork(&a).is_some();
            let after = find_information_fork(&a.color_extend("r").unwrap()).is_some();
            assert_eq!(before, after);
        }
    }

    #[test]
    fn json_round_trip() {
        let a = example_independent();
        let text = serde_json::to_string_pretty(&a).unwrap();
        let back: Architecture = serde_json::from_str(&text).unwrap();
        assert_eq!(a, back);
        // Invalid documents are rejected at deserialization time.
        let bad = r#"{"env":{"name":"e","outputs":["a"]},
                      "processes":[{"name":"p","inputs":["zz"],"outputs":["c"]}]}"#;
        assert!(serde_json::from_str::<Architecture>(bad).is_err());
    }
}
