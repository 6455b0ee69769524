//! Combinational circuits over the gate basis {CONST0, CONST1, NOT, AND, OR}.
//!
//! Gates are stored in topological order: every reference points at a circuit
//! input or at a strictly earlier gate, so evaluation is a single forward pass.
//! Bit vectors are `[bool]` slices ordered variable 0 first; when read as a
//! number, variable 0 is the most significant bit.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// A wire: either a circuit input or the output of a gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ref {
    Input(usize),
    Gate(usize),
}

impl fmt::Display for Ref {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ref::Input(i) => write!(f, "i{i}"),
            Ref::Gate(g) => write!(f, "g{g}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Const0,
    Const1,
    Not(Ref),
    And(Ref, Ref),
    Or(Ref, Ref),
}

impl Gate {
    fn refs(&self) -> impl Iterator<Item = Ref> {
        let (a, b) = match *self {
            Gate::Const0 | Gate::Const1 => (None, None),
            Gate::Not(a) => (Some(a), None),
            Gate::And(a, b) | Gate::Or(a, b) => (Some(a), Some(b)),
        };
        a.into_iter().chain(b)
    }
}

/// Where an out-of-range reference was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefSite {
    Gate(usize),
    Output(usize),
}

impl fmt::Display for RefSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefSite::Gate(g) => write!(f, "gate {g}"),
            RefSite::Output(o) => write!(f, "output {o}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("gate {0} refers to a gate that is not strictly earlier")]
    ForwardRef(usize),
    #[error("{site} refers to {target}, which does not exist")]
    RefOutOfRange { site: RefSite, target: Ref },
    #[error("circuit has no outputs")]
    EmptyOutputs,
    #[error("expected {expected} input bits, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("enumeration needs {required} rows but the cap is {cap}")]
    CapExceeded { required: u128, cap: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    input_arity: usize,
    gates: Vec<Gate>,
    outputs: Vec<Ref>,
}

impl Circuit {
    /// Builds and validates a circuit.
    pub fn new(
        input_arity: usize,
        gates: Vec<Gate>,
        outputs: Vec<Ref>,
    ) -> Result<Self, Vec<CircuitError>> {
        let c = Self::from_parts(input_arity, gates, outputs);
        c.validate()?;
        Ok(c)
    }

    /// Assembles a circuit without checking it. Call [`Circuit::validate`]
    /// before evaluating anything built this way.
    pub fn from_parts(input_arity: usize, gates: Vec<Gate>, outputs: Vec<Ref>) -> Self {
        Circuit {
            input_arity,
            gates,
            outputs,
        }
    }

    /// A circuit whose outputs copy the selected inputs.
    pub fn projection(input_arity: usize, selected: impl IntoIterator<Item = usize>) -> Self {
        let outputs: Vec<Ref> = selected.into_iter().map(Ref::Input).collect();
        Self::new(input_arity, Vec::new(), outputs).expect("projection indices in range")
    }

    /// A circuit with `input_arity` inputs and a single constant output.
    pub fn constant(input_arity: usize, value: bool) -> Self {
        let gate = if value { Gate::Const1 } else { Gate::Const0 };
        Self::from_parts(input_arity, vec![gate], vec![Ref::Gate(0)])
    }

    pub fn input_arity(&self) -> usize {
        self.input_arity
    }

    pub fn output_arity(&self) -> usize {
        self.outputs.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Ref] {
        &self.outputs
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Checks topological order and reference ranges, reporting every violation.
    pub fn validate(&self) -> Result<(), Vec<CircuitError>> {
        let mut errors = Vec::new();
        for (idx, gate) in self.gates.iter().enumerate() {
            let mut forward = false;
            for r in gate.refs() {
                match r {
                    Ref::Input(i) if i >= self.input_arity => {
                        errors.push(CircuitError::RefOutOfRange {
                            site: RefSite::Gate(idx),
                            target: r,
                        });
                    }
                    Ref::Gate(g) if g >= self.gates.len() => {
                        errors.push(CircuitError::RefOutOfRange {
                            site: RefSite::Gate(idx),
                            target: r,
                        });
                    }
                    Ref::Gate(g) if g >= idx => forward = true,
                    _ => {}
                }
            }
            if forward {
                errors.push(CircuitError::ForwardRef(idx));
            }
        }
        if self.outputs.is_empty() {
            errors.push(CircuitError::EmptyOutputs);
        }
        for (idx, &r) in self.outputs.iter().enumerate() {
            let ok = match r {
                Ref::Input(i) => i < self.input_arity,
                Ref::Gate(g) => g < self.gates.len(),
            };
            if !ok {
                errors.push(CircuitError::RefOutOfRange {
                    site: RefSite::Output(idx),
                    target: r,
                });
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    /// Evaluates the circuit on one input vector.
    pub fn eval(&self, input: &[bool]) -> Result<Vec<bool>, CircuitError> {
        let mut scratch = Vec::with_capacity(self.gates.len());
        self.eval_with(input, &mut scratch)
    }

    /// Like [`Circuit::eval`], reusing `scratch` for gate values.
    pub fn eval_with(
        &self,
        input: &[bool],
        scratch: &mut Vec<bool>,
    ) -> Result<Vec<bool>, CircuitError> {
        if input.len() != self.input_arity {
            return Err(CircuitError::ArityMismatch {
                expected: self.input_arity,
                got: input.len(),
            });
        }
        scratch.clear();
        for gate in &self.gates {
            let value = {
                let get = |r: Ref| match r {
                    Ref::Input(i) => input[i],
                    Ref::Gate(g) => scratch[g],
                };
                match *gate {
                    Gate::Const0 => false,
                    Gate::Const1 => true,
                    Gate::Not(a) => !get(a),
                    Gate::And(a, b) => get(a) && get(b),
                    Gate::Or(a, b) => get(a) || get(b),
                }
            };
            scratch.push(value);
        }
        Ok(self
            .outputs
            .iter()
            .map(|&r| match r {
                Ref::Input(i) => input[i],
                Ref::Gate(g) => scratch[g],
            })
            .collect())
    }

    /// Evaluates every input vector in canonical order (numeric value, input 0
    /// most significant). Row `x` of the result is `eval(bits(x))`.
    pub fn truth_table(&self, cap: u128) -> Result<Vec<Vec<bool>>, CircuitError> {
        let required = rows_for_bits(self.input_arity);
        if required > cap {
            return Err(CircuitError::CapExceeded { required, cap });
        }
        let rows = required as usize;
        let mut scratch = Vec::with_capacity(self.gates.len());
        (0..rows)
            .map(|x| self.eval_with(&index_to_bits(x as u128, self.input_arity), &mut scratch))
            .collect()
    }
}

/// `2^bits`, saturating at `u128::MAX`.
pub fn rows_for_bits(bits: usize) -> u128 {
    if bits >= 128 {
        u128::MAX
    } else {
        1u128 << bits
    }
}

/// Reads a bit vector as a number, bit 0 most significant.
pub fn bits_to_index(bits: &[bool]) -> u128 {
    bits.iter().fold(0u128, |acc, &b| (acc << 1) | b as u128)
}

/// Inverse of [`bits_to_index`] for a fixed width.
pub fn index_to_bits(value: u128, width: usize) -> Vec<bool> {
    (0..width)
        .map(|i| (value >> (width - 1 - i)) & 1 == 1)
        .collect()
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_bits(text: &str) -> Option<Vec<bool>> {
    text.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

/// Number of bits needed to give `count` values distinct codes (at least 1).
pub fn bits_for(count: usize) -> usize {
    let mut bits = 1;
    while (1usize << bits) < count {
        bits += 1;
    }
    bits
}

/// Incremental circuit construction with macro gates (XOR, MUX, comparators).
///
/// Constants and negations are cached so repeated requests reuse one gate.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    input_arity: usize,
    gates: Vec<Gate>,
    constants: [Option<Ref>; 2],
    negations: HashMap<Ref, Ref>,
}

impl CircuitBuilder {
    pub fn new(input_arity: usize) -> Self {
        CircuitBuilder {
            input_arity,
            gates: Vec::new(),
            constants: [None, None],
            negations: HashMap::new(),
        }
    }

    pub fn input(&self, i: usize) -> Ref {
        assert!(i < self.input_arity, "input {i} out of range");
        Ref::Input(i)
    }

    pub fn inputs(&self, range: std::ops::Range<usize>) -> Vec<Ref> {
        range.map(|i| self.input(i)).collect()
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    fn push(&mut self, gate: Gate) -> Ref {
        self.gates.push(gate);
        Ref::Gate(self.gates.len() - 1)
    }

    pub fn constant(&mut self, value: bool) -> Ref {
        if let Some(r) = self.constants[value as usize] {
            return r;
        }
        let r = self.push(if value { Gate::Const1 } else { Gate::Const0 });
        self.constants[value as usize] = Some(r);
        r
    }

    pub fn not(&mut self, a: Ref) -> Ref {
        if let Some(&r) = self.negations.get(&a) {
            return r;
        }
        let r = self.push(Gate::Not(a));
        self.negations.insert(a, r);
        r
    }

    pub fn and(&mut self, a: Ref, b: Ref) -> Ref {
        self.push(Gate::And(a, b))
    }

    pub fn or(&mut self, a: Ref, b: Ref) -> Ref {
        self.push(Gate::Or(a, b))
    }

    pub fn xor(&mut self, a: Ref, b: Ref) -> Ref {
        let either = self.or(a, b);
        let both = self.and(a, b);
        let not_both = self.not(both);
        self.and(either, not_both)
    }

    /// Conjunction of all refs; the empty conjunction is CONST1.
    pub fn and_all(&mut self, refs: &[Ref]) -> Ref {
        match refs.split_first() {
            None => self.constant(true),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &r| self.and(acc, r)),
        }
    }

    /// Disjunction of all refs; the empty disjunction is CONST0.
    pub fn or_all(&mut self, refs: &[Ref]) -> Ref {
        match refs.split_first() {
            None => self.constant(false),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &r| self.or(acc, r)),
        }
    }

    /// `sel ? if_true : if_false`.
    pub fn mux(&mut self, sel: Ref, if_true: Ref, if_false: Ref) -> Ref {
        let t = self.and(sel, if_true);
        let ns = self.not(sel);
        let f = self.and(ns, if_false);
        self.or(t, f)
    }

    pub fn mux_bits(&mut self, sel: Ref, if_true: &[Ref], if_false: &[Ref]) -> Vec<Ref> {
        assert_eq!(if_true.len(), if_false.len());
        if_true
            .iter()
            .zip(if_false)
            .map(|(&t, &f)| self.mux(sel, t, f))
            .collect()
    }

    /// The literal `r` when `value` holds, its negation otherwise.
    pub fn literal(&mut self, r: Ref, value: bool) -> Ref {
        if value {
            r
        } else {
            self.not(r)
        }
    }

    /// True iff `bits` (bit 0 most significant) spell `value`.
    pub fn eq_const(&mut self, bits: &[Ref], value: u128) -> Ref {
        let pattern = index_to_bits(value, bits.len());
        if bits.len() < 128 && value >> bits.len() != 0 {
            return self.constant(false);
        }
        let lits: Vec<Ref> = bits
            .iter()
            .zip(pattern)
            .map(|(&b, v)| self.literal(b, v))
            .collect();
        self.and_all(&lits)
    }

    /// `gate AND r` for every `r`.
    pub fn mask(&mut self, gate: Ref, refs: &[Ref]) -> Vec<Ref> {
        refs.iter().map(|&r| self.and(gate, r)).collect()
    }

    pub fn finish(self, outputs: Vec<Ref>) -> Circuit {
        Circuit::new(self.input_arity, self.gates, outputs)
            .expect("builder only emits well-formed circuits")
    }
}
