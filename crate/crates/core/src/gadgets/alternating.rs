use crate::circuit::{Circuit, CircuitBuilder};
use crate::model::{AgentSet, CircuitSystem};

use super::encoding::{IdLayout, IdRefs};
use super::tm::{AltTM, Label, MachineId};
use super::GadgetError;

/// Two-agent circuit system simulating an alternating machine on a tape of
/// `n` cells.
///
/// State bits hold an encoded configuration followed by two flags: the
/// first marks the accepting sink, the second the rejecting sink. Entering
/// a sink clears the configuration bits. Both agents propose a move code;
/// agent 0's proposal is used at existential and deterministic states and
/// agent 1's at universal ones. An illegal proposal sends play to the sink
/// that punishes its author (rejecting for agent 0, accepting for agent 1);
/// a legal move that leaves the tape rejects. Configurations in accepting or
/// rejecting states stay put. Agent 0's goal is an accepting head state or
/// the accepting sink; agent 1 has no goal.
///
/// Returns the system and the empty coalition: an equilibrium in which
/// nobody wins exists exactly when the machine rejects.
pub fn atm_to_circuit_system(
    m: &AltTM,
    n: usize,
) -> Result<(CircuitSystem, AgentSet), GadgetError> {
    if n == 0 {
        return Err(GadgetError::TapeTooShort { min: 1, got: n });
    }
    let (nr, ng) = (m.states().len(), m.symbols().len());
    let layout = IdLayout::new(n, ng, nr);
    let w = layout.width();
    let k = layout.move_width();
    let sv = w + 2;

    let mut b = CircuitBuilder::new(sv + 2 * k);
    let id = IdRefs::inputs(&b, &layout, 0);
    let acc = b.input(w);
    let rej = b.input(w + 1);
    let a0 = b.inputs(sv..sv + k);
    let a1 = b.inputs(sv + k..sv + 2 * k);
    let (is_state, situation) = id.situation(&mut b, nr, ng);
    let labelled = |b: &mut CircuitBuilder, pred: &dyn Fn(Label) -> bool| {
        let hits: Vec<_> = (0..nr)
            .filter(|&r| pred(m.label(r)))
            .map(|r| is_state[r])
            .collect();
        b.or_all(&hits)
    };
    let universal = labelled(&mut b, &|l| l == Label::Forall);
    let halted = labelled(&mut b, &|l| matches!(l, Label::Accept | Label::Reject));
    let mover = b.mux_bits(universal, &a1, &a0);

    let mut legal_terms = Vec::new();
    for (r, s, mv) in m.transitions() {
        if matches!(m.label(r), Label::Accept | Label::Reject) {
            continue;
        }
        let proposed = b.eq_const(&mover, layout.encode_move(mv));
        legal_terms.push(b.and(situation[r][s], proposed));
    }
    let legal = b.or_all(&legal_terms);
    let (next, oob) = id.apply_move(&mut b, &layout, &mover);

    let sink = b.or(acc, rej);
    let stay = b.or(sink, halted);
    let active = b.not(stay);
    let illegal = b.not(legal);
    let in_bounds = b.not(oob);
    let illegal_active = b.and(active, illegal);
    let go_acc = b.and(illegal_active, universal);
    let existential = b.not(universal);
    let reject_illegal = b.and(illegal_active, existential);
    let legal_active = b.and(active, legal);
    let reject_oob = b.and(legal_active, oob);
    let go_rej = b.or(reject_illegal, reject_oob);
    let step = b.and(legal_active, in_bounds);

    let mut outputs = Vec::with_capacity(sv);
    for (old, new) in id.bits().into_iter().zip(next.bits()) {
        let kept = b.and(stay, old);
        let moved = b.and(step, new);
        outputs.push(b.or(kept, moved));
    }
    let kept_acc = b.and(sink, acc);
    outputs.push(b.or(kept_acc, go_acc));
    let kept_rej = b.and(sink, rej);
    outputs.push(b.or(kept_rej, go_rej));
    let phi = b.finish(outputs);

    let mut g = CircuitBuilder::new(sv);
    let gid = IdRefs::inputs(&g, &layout, 0);
    let (gacc, grej) = (g.input(w), g.input(w + 1));
    let acc_states: Vec<_> = (0..nr)
        .filter(|&r| m.label(r) == Label::Accept)
        .map(|r| r as u128)
        .collect();
    let hits: Vec<_> = acc_states
        .iter()
        .map(|&r| g.eq_const(&gid.state, r))
        .collect();
    let head_accepts = g.or_all(&hits);
    let flags = g.or(gacc, grej);
    let normal = g.not(flags);
    let normal_accept = g.and(normal, head_accepts);
    let goal0 = g.or(gacc, normal_accept);
    let goal0 = g.finish(vec![goal0]);

    let mut init = layout.encode(&MachineId::initial(n, m.init()));
    init.extend([false, false]);
    let sys = CircuitSystem::new(
        sv,
        init,
        vec![k, k],
        vec![goal0, Circuit::constant(sv, false)],
        phi,
    )
    .map_err(|mut e| GadgetError::Model(e.remove(0)))?;
    Ok((sys, AgentSet::empty()))
}
