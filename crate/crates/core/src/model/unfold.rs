use std::collections::{HashMap, VecDeque};

use crate::circuit::{bits_to_index, bits_to_string, index_to_bits, rows_for_bits, CircuitError};

use super::{
    CircuitSystem, CircuitTransducer, ExplicitSystem, ExplicitTransducer, ModelError,
    MultiAgentSystem,
};

/// Default limit on materialized table rows.
pub const DEFAULT_ROW_CAP: u128 = 1 << 24;

fn cap_error(e: CircuitError) -> ModelError {
    match e {
        CircuitError::CapExceeded { required, cap } => ModelError::CapExceeded { required, cap },
        other => ModelError::Circuit {
            what: "unfolding".into(),
            source: other,
        },
    }
}

fn bit_names(width: usize) -> Vec<String> {
    (0..1u128 << width)
        .map(|x| bits_to_string(&index_to_bits(x, width)))
        .collect()
}

/// Expands a circuit system into its full transition table: one state per bit
/// vector, ordered by numeric value.
pub fn unfold(csys: &CircuitSystem, cap: u128) -> Result<ExplicitSystem, ModelError> {
    let v = csys.state_vars();
    let total_action = csys.total_action_vars();
    let required = rows_for_bits(v + total_action);
    if required > cap {
        return Err(ModelError::CapExceeded { required, cap });
    }
    let table: Vec<usize> = csys
        .phi()
        .truth_table(cap)
        .map_err(cap_error)?
        .iter()
        .map(|out| bits_to_index(out) as usize)
        .collect();
    let mut goals = Vec::new();
    for g in csys.goal_circuits() {
        let tt = g.truth_table(cap).map_err(cap_error)?;
        goals.push((0..tt.len()).filter(|&s| tt[s][0]).collect());
    }
    ExplicitSystem::from_table(
        bit_names(v),
        bits_to_index(csys.init()) as usize,
        csys.action_vars().iter().map(|&w| bit_names(w)).collect(),
        goals,
        table,
    )
    .map_err(|mut es| es.remove(0))
}

/// Expands agent `agent`'s circuit transducer into tables over the states of
/// `unfold(csys)`.
pub fn unfold_transducer(
    ct: &CircuitTransducer,
    csys: &CircuitSystem,
    agent: usize,
    cap: u128,
) -> Result<ExplicitTransducer, ModelError> {
    ct.check_against(csys, agent)?;
    let s = ct.state_vars();
    let required = rows_for_bits(s + csys.state_vars());
    if required > cap {
        return Err(ModelError::CapExceeded { required, cap });
    }
    let trans = ct
        .omega()
        .truth_table(cap)
        .map_err(cap_error)?
        .iter()
        .map(|out| bits_to_index(out) as usize)
        .collect();
    let output = ct
        .output_circuit()
        .truth_table(cap)
        .map_err(cap_error)?
        .iter()
        .map(|out| bits_to_index(out) as usize)
        .collect();
    ExplicitTransducer::new(
        bit_names(s),
        bits_to_index(ct.init_bits()) as usize,
        1 << csys.state_vars(),
        trans,
        output,
    )
    .map_err(|mut es| es.remove(0))
}

/// Explicit system over only the states reachable from the initial state.
///
/// States keep their bit-string names and are ordered by numeric value, so
/// the result is the restriction of [`unfold`] to its reachable part.
pub fn reachable_fragment(csys: &CircuitSystem, cap: u128) -> Result<ExplicitSystem, ModelError> {
    let k = csys.agent_count();
    let dcount = rows_for_bits(csys.total_action_vars());
    let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut found: Vec<Vec<bool>> = Vec::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(csys.init().to_vec(), 0);
    found.push(csys.init().to_vec());
    queue.push_back(0usize);
    let total_action = csys.total_action_vars();
    let mut input = Vec::new();
    let mut scratch = Vec::new();
    while let Some(u) = queue.pop_front() {
        let required = (succ.len() as u128 + 1).saturating_mul(dcount);
        if required > cap {
            return Err(ModelError::CapExceeded {
                required: (found.len() as u128).saturating_mul(dcount),
                cap,
            });
        }
        let mut row = Vec::with_capacity(dcount as usize);
        for d in 0..dcount {
            input.clear();
            input.extend_from_slice(&found[u]);
            input.extend(index_to_bits(d, total_action));
            let next = csys
                .phi()
                .eval_with(&input, &mut scratch)
                .expect("arity checked at construction");
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = found.len();
                    index.insert(next.clone(), id);
                    found.push(next);
                    queue.push_back(id);
                    id
                }
            };
            row.push(id);
        }
        debug_assert_eq!(succ.len(), u);
        succ.push(row);
    }
    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by(|&a, &b| found[a].cmp(&found[b]));
    let mut rank = vec![0; found.len()];
    for (r, &u) in order.iter().enumerate() {
        rank[u] = r;
    }
    let mut table = Vec::with_capacity(found.len() * dcount as usize);
    for &u in &order {
        table.extend(succ[u].iter().map(|&w| rank[w]));
    }
    let goals = (0..k)
        .map(|i| {
            order
                .iter()
                .enumerate()
                .filter(|(_, &u)| csys.goal_holds(i, &found[u]))
                .map(|(r, _)| r)
                .collect()
        })
        .collect();
    ExplicitSystem::from_table(
        order.iter().map(|&u| bits_to_string(&found[u])).collect(),
        rank[0],
        csys.action_vars().iter().map(|&w| bit_names(w)).collect(),
        goals,
        table,
    )
    .map_err(|mut es| es.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, CircuitBuilder, Gate, Ref};
    use crate::model::transducer_step;

    fn one_var(phi: Circuit) -> CircuitSystem {
        CircuitSystem::new(
            1,
            vec![false],
            vec![1],
            vec![Circuit::constant(1, false)],
            phi,
        )
        .unwrap()
    }

    #[test]
    fn identity_unfolds_to_self_loops() {
        let e = unfold(&one_var(Circuit::projection(2, [0])), DEFAULT_ROW_CAP).unwrap();
        assert_eq!(e.state_count(), 2);
        assert_eq!(e.decision_count(), 2);
        for v in 0..2 {
            assert_eq!(e.row(v), &[v, v]);
        }
        assert_eq!(e.state_name(1), "1");
    }

    #[test]
    fn negation_alternates() {
        let phi = Circuit::new(2, vec![Gate::Not(Ref::Input(0))], vec![Ref::Gate(0)]).unwrap();
        let e = unfold(&one_var(phi), DEFAULT_ROW_CAP).unwrap();
        assert_eq!(e.row(0), &[1, 1]);
        assert_eq!(e.row(1), &[0, 0]);
    }

    #[test]
    fn unfold_respects_cap() {
        let c = one_var(Circuit::projection(2, [0]));
        assert_eq!(
            unfold(&c, 3),
            Err(ModelError::CapExceeded {
                required: 4,
                cap: 3
            })
        );
    }

    #[test]
    fn transducer_identity_constant_output() {
        let sys = one_var(Circuit::projection(2, [0]));
        let ct = CircuitTransducer::new(
            1,
            vec![false],
            Circuit::projection(2, [0]),
            Circuit::constant(1, false),
        )
        .unwrap();
        let et = unfold_transducer(&ct, &sys, 0, DEFAULT_ROW_CAP).unwrap();
        for s in 0..2 {
            for v in 0..2 {
                assert_eq!(transducer_step(&et, &s, &v), (s, 0));
            }
        }
    }

    #[test]
    fn transducer_xor_toggle_table() {
        let sys = one_var(Circuit::projection(2, [0]));
        let mut b = CircuitBuilder::new(2);
        let x = b.xor(Ref::Input(0), Ref::Input(1));
        let ct = CircuitTransducer::new(
            1,
            vec![false],
            b.finish(vec![x]),
            Circuit::projection(1, [0]),
        )
        .unwrap();
        let et = unfold_transducer(&ct, &sys, 0, DEFAULT_ROW_CAP).unwrap();
        assert_eq!(et.successor(0, 0), 0);
        assert_eq!(et.successor(0, 1), 1);
        assert_eq!(et.successor(1, 0), 1);
        assert_eq!(et.successor(1, 1), 0);
        assert_eq!(transducer_step(&et, &0, &1), (1, 1));
    }

    #[test]
    fn fragment_keeps_only_reachable() {
        // two state vars; phi keeps var 0 and sets var 1 to the action bit
        let phi = Circuit::projection(3, [0, 2]);
        let sys = CircuitSystem::new(
            2,
            vec![false, false],
            vec![1],
            vec![Circuit::projection(2, [1])],
            phi,
        )
        .unwrap();
        let f = reachable_fragment(&sys, DEFAULT_ROW_CAP).unwrap();
        assert_eq!(f.state_names(), &["00".to_string(), "01".to_string()]);
        assert_eq!(f.goal_states(0), vec![1]);
        let full = unfold(&sys, DEFAULT_ROW_CAP).unwrap();
        assert_eq!(full.state_count(), 4);
    }
}
