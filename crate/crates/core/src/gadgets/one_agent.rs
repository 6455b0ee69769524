use crate::circuit::{bits_for, Circuit, CircuitBuilder};
use crate::model::{AgentSet, CircuitSystem, CircuitTransducer, StrategyProfile};

use super::encoding::{select_code, IdLayout, IdRefs};
use super::tm::{DetTM, MachineId};
use super::GadgetError;

/// One-agent circuit system whose state is an encoded configuration of the
/// machine plus an error bit, together with a transducer that runs the
/// machine.
///
/// An action names a head position and a move code. The system applies the
/// move when the head really is at the named position and stays on the
/// tape; otherwise it raises the error bit, which is absorbing. The goal is
/// a configuration whose head state is accepting.
///
/// The transducer copies the observed system state and outputs the head
/// position together with the machine's move for it. The profile is an
/// equilibrium for the agent exactly when the machine accepts the blank tape
/// of `n` cells.
pub fn dtm_to_one_agent_circuit(
    m: &DetTM,
    n: usize,
) -> Result<(CircuitSystem, StrategyProfile, AgentSet), GadgetError> {
    if n == 0 {
        return Err(GadgetError::TapeTooShort { min: 1, got: n });
    }
    let (nr, ng) = (m.states().len(), m.symbols().len());
    let layout = IdLayout::new(n, ng, nr);
    let w = layout.width();
    let sv = w + 1;
    let pos_bits = bits_for(n);
    let av = pos_bits + layout.move_width();

    let mut b = CircuitBuilder::new(sv + av);
    let id = IdRefs::inputs(&b, &layout, 0);
    let err = b.input(w);
    let pos = b.inputs(sv..sv + pos_bits);
    let mv = b.inputs(sv + pos_bits..sv + av);
    let at: Vec<_> = (0..n)
        .map(|c| {
            let named = b.eq_const(&pos, c as u128);
            b.and(named, id.head[c])
        })
        .collect();
    let head_named = b.or_all(&at);
    let (next, oob) = id.apply_move(&mut b, &layout, &mv);
    let in_bounds = b.not(oob);
    let fine = b.not(err);
    let valid = b.and(head_named, in_bounds);
    let step = b.and(fine, valid);
    let mut outputs: Vec<_> = next.bits().into_iter().map(|x| b.and(step, x)).collect();
    outputs.push(b.not(step));
    let phi = b.finish(outputs);

    let mut g = CircuitBuilder::new(sv);
    let gid = IdRefs::inputs(&g, &layout, 0);
    let gerr = g.input(w);
    let hits: Vec<_> = m
        .accepting_states()
        .into_iter()
        .map(|r| g.eq_const(&gid.state, r as u128))
        .collect();
    let accepting = g.or_all(&hits);
    let clean = g.not(gerr);
    let goal = g.and(clean, accepting);
    let goal = g.finish(vec![goal]);

    let mut init = layout.encode(&MachineId::initial(n, m.init()));
    init.push(false);
    let sys = CircuitSystem::new(sv, init.clone(), vec![av], vec![goal], phi)
        .map_err(|mut e| GadgetError::Model(e.remove(0)))?;

    let omega = Circuit::projection(2 * sv, sv..2 * sv);
    let mut o = CircuitBuilder::new(sv);
    let oid = IdRefs::inputs(&o, &layout, 0);
    let head_pos: Vec<_> = (0..n).map(|c| (oid.head[c], c as u128)).collect();
    let mut out = select_code(&mut o, pos_bits, &head_pos);
    let (_, situation) = oid.situation(&mut o, nr, ng);
    let cases: Vec<_> = m
        .transitions()
        .into_iter()
        .filter(|&(r, _, _)| !m.is_accepting(r))
        .map(|(r, s, mv)| (situation[r][s], layout.encode_move(mv)))
        .collect();
    out.extend(select_code(&mut o, layout.move_width(), &cases));
    let output = o.finish(out);
    let t = CircuitTransducer::new(sv, init, omega, output)
        .map_err(|mut e| GadgetError::Model(e.remove(0)))?;
    Ok((
        sys,
        StrategyProfile::Circuit(vec![t]),
        AgentSet::singleton(0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::tm::dtm_accepts;
    use crate::gadgets::tm::tests::{looper, names, runaway, writer};
    use crate::gadgets::tm::{Dir, Move};
    use crate::gadgets::GATE_FACTOR;
    use crate::verify::{verify, SystemRef};

    fn verdict(m: &DetTM, n: usize) -> bool {
        let (sys, profile, w) = dtm_to_one_agent_circuit(m, n).unwrap();
        verify(SystemRef::Circuit(&sys), &profile, w)
            .unwrap()
            .is_wne
    }

    #[test]
    fn accepting_start() {
        let m = DetTM::new(names(&["r0"]), names(&["_"]), 0, &[0], &[]).unwrap();
        assert!(verdict(&m, 1));
    }

    #[test]
    fn curated_machines_match_oracle() {
        for m in [writer(), runaway(), looper()] {
            for n in 1..=4 {
                assert_eq!(verdict(&m, n), dtm_accepts(&m, n), "n = {n}");
            }
        }
        assert!(verdict(&writer(), 2));
        assert!(!verdict(&runaway(), 3));
    }

    #[test]
    fn wrong_position_raises_error() {
        let m = writer();
        let (sys, _, _) = dtm_to_one_agent_circuit(&m, 2).unwrap();
        let layout = IdLayout::new(2, 2, 2);
        let mut action = vec![true];
        action.extend(crate::circuit::index_to_bits(
            layout.encode_move(Move::new(1, 1, Dir::Right)),
            layout.move_width(),
        ));
        let next = sys.step_bits(sys.init(), &action);
        assert!(next[layout.width()]);
        assert_eq!(sys.step_bits(&next, &action), next);
    }

    #[test]
    fn gate_counts_stay_polynomial() {
        for m in [writer(), runaway(), looper()] {
            for n in 1..=4 {
                let (sys, profile, _) = dtm_to_one_agent_circuit(&m, n).unwrap();
                let StrategyProfile::Circuit(ts) = profile else {
                    unreachable!()
                };
                let size = m.states().len() * m.symbols().len();
                let gates = sys.phi().gate_count()
                    + sys.goal_circuit(0).gate_count()
                    + ts[0].output_circuit().gate_count();
                assert!(gates <= GATE_FACTOR * size.pow(3) * n, "{gates} gates");
            }
        }
    }
}
