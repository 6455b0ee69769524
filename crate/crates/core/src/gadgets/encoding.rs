use crate::circuit::{bits_for, bits_to_index, index_to_bits, CircuitBuilder, Ref};

use super::tm::{Dir, MachineId, Move};

/// Bit layout of a machine configuration on a tape of fixed length.
///
/// Each cell contributes its symbol code followed by a head-presence bit;
/// the control state code comes last. All codes are most significant bit
/// first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdLayout {
    cells: usize,
    symbols: usize,
    states: usize,
    sym_bits: usize,
    state_bits: usize,
}

impl IdLayout {
    pub fn new(cells: usize, symbols: usize, states: usize) -> Self {
        IdLayout {
            cells,
            symbols,
            states,
            sym_bits: bits_for(symbols),
            state_bits: bits_for(states),
        }
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn sym_bits(&self) -> usize {
        self.sym_bits
    }

    pub fn state_bits(&self) -> usize {
        self.state_bits
    }

    pub fn width(&self) -> usize {
        self.cells * (self.sym_bits + 1) + self.state_bits
    }

    /// Bits of a move code: new state, written symbol, direction (1 = right).
    pub fn move_width(&self) -> usize {
        self.state_bits + self.sym_bits + 1
    }

    pub fn symbol_var(&self, cell: usize, bit: usize) -> usize {
        cell * (self.sym_bits + 1) + bit
    }

    pub fn head_var(&self, cell: usize) -> usize {
        cell * (self.sym_bits + 1) + self.sym_bits
    }

    pub fn state_var(&self, bit: usize) -> usize {
        self.cells * (self.sym_bits + 1) + bit
    }

    pub fn encode(&self, id: &MachineId) -> Vec<bool> {
        let mut bits = Vec::with_capacity(self.width());
        for (c, &s) in id.tape.iter().enumerate() {
            bits.extend(index_to_bits(s as u128, self.sym_bits));
            bits.push(c == id.head);
        }
        bits.extend(index_to_bits(id.state as u128, self.state_bits));
        bits
    }

    /// Inverse of [`IdLayout::encode`]; `None` unless exactly one head bit is
    /// set and every code is in range.
    pub fn decode(&self, bits: &[bool]) -> Option<MachineId> {
        if bits.len() < self.width() {
            return None;
        }
        let mut tape = Vec::with_capacity(self.cells);
        let mut heads = Vec::new();
        for c in 0..self.cells {
            let s = bits_to_index(&bits[self.symbol_var(c, 0)..self.head_var(c)]) as usize;
            if s >= self.symbols {
                return None;
            }
            tape.push(s);
            if bits[self.head_var(c)] {
                heads.push(c);
            }
        }
        let state = bits_to_index(&bits[self.state_var(0)..self.width()]) as usize;
        (heads.len() == 1 && state < self.states).then(|| MachineId {
            tape,
            head: heads[0],
            state,
        })
    }

    pub fn encode_move(&self, m: Move) -> u128 {
        ((m.state as u128) << (self.sym_bits + 1))
            | ((m.symbol as u128) << 1)
            | (m.dir == Dir::Right) as u128
    }

    pub fn decode_move(&self, bits: &[bool]) -> Option<Move> {
        if bits.len() != self.move_width() {
            return None;
        }
        let state = bits_to_index(&bits[..self.state_bits]) as usize;
        let symbol =
            bits_to_index(&bits[self.state_bits..self.state_bits + self.sym_bits]) as usize;
        let dir = if bits[self.move_width() - 1] {
            Dir::Right
        } else {
            Dir::Left
        };
        (state < self.states && symbol < self.symbols).then_some(Move { state, symbol, dir })
    }
}

/// Circuit references to the fields of an encoded configuration.
#[derive(Debug, Clone)]
pub(crate) struct IdRefs {
    pub syms: Vec<Vec<Ref>>,
    pub head: Vec<Ref>,
    pub state: Vec<Ref>,
}

impl IdRefs {
    /// Refs for a configuration starting at input `offset`.
    pub fn inputs(b: &CircuitBuilder, layout: &IdLayout, offset: usize) -> Self {
        IdRefs {
            syms: (0..layout.cells)
                .map(|c| {
                    (0..layout.sym_bits)
                        .map(|k| b.input(offset + layout.symbol_var(c, k)))
                        .collect()
                })
                .collect(),
            head: (0..layout.cells)
                .map(|c| b.input(offset + layout.head_var(c)))
                .collect(),
            state: (0..layout.state_bits)
                .map(|k| b.input(offset + layout.state_var(k)))
                .collect(),
        }
    }

    /// Flattens back into encoding order.
    pub fn bits(&self) -> Vec<Ref> {
        let mut out = Vec::new();
        for (sym, &h) in self.syms.iter().zip(&self.head) {
            out.extend(sym);
            out.push(h);
        }
        out.extend(&self.state);
        out
    }

    /// Code of the symbol under the head.
    pub fn read_symbol(&self, b: &mut CircuitBuilder) -> Vec<Ref> {
        let width = self.syms.first().map_or(0, Vec::len);
        (0..width)
            .map(|k| {
                let terms: Vec<Ref> = self
                    .syms
                    .iter()
                    .zip(&self.head)
                    .map(|(s, &h)| b.and(h, s[k]))
                    .collect();
                b.or_all(&terms)
            })
            .collect()
    }

    /// Configuration after applying the move code `mv`, plus a flag that is
    /// true when the move would leave the tape.
    pub fn apply_move(
        &self,
        b: &mut CircuitBuilder,
        layout: &IdLayout,
        mv: &[Ref],
    ) -> (IdRefs, Ref) {
        let n = self.head.len();
        let new_state = mv[..layout.state_bits].to_vec();
        let new_sym = &mv[layout.state_bits..layout.state_bits + layout.sym_bits];
        let right = mv[layout.move_width() - 1];
        let left = b.not(right);
        let syms = self
            .syms
            .iter()
            .zip(&self.head)
            .map(|(s, &h)| b.mux_bits(h, new_sym, s))
            .collect();
        let head = (0..n)
            .map(|c| {
                let from_left = if c > 0 {
                    b.and(self.head[c - 1], right)
                } else {
                    b.constant(false)
                };
                let from_right = if c + 1 < n {
                    b.and(self.head[c + 1], left)
                } else {
                    b.constant(false)
                };
                b.or(from_left, from_right)
            })
            .collect();
        let off_left = b.and(self.head[0], left);
        let off_right = b.and(self.head[n - 1], right);
        let oob = b.or(off_left, off_right);
        (
            IdRefs {
                syms,
                head,
                state: new_state,
            },
            oob,
        )
    }

    /// `match[r][σ]`: the head is in state r reading symbol σ.
    pub fn situation(
        &self,
        b: &mut CircuitBuilder,
        states: usize,
        symbols: usize,
    ) -> (Vec<Ref>, Vec<Vec<Ref>>) {
        let read = self.read_symbol(b);
        let is_state: Vec<Ref> = (0..states)
            .map(|r| b.eq_const(&self.state, r as u128))
            .collect();
        let is_sym: Vec<Ref> = (0..symbols).map(|s| b.eq_const(&read, s as u128)).collect();
        let table = is_state
            .iter()
            .map(|&r| is_sym.iter().map(|&s| b.and(r, s)).collect())
            .collect();
        (is_state, table)
    }
}

/// ORs constant codes together under their guards: bit k of the result is
/// set iff some guard whose code has bit k set holds.
pub(crate) fn select_code(b: &mut CircuitBuilder, width: usize, cases: &[(Ref, u128)]) -> Vec<Ref> {
    (0..width)
        .map(|k| {
            let terms: Vec<Ref> = cases
                .iter()
                .filter(|(_, code)| (code >> (width - 1 - k)) & 1 == 1)
                .map(|&(g, _)| g)
                .collect();
            b.or_all(&terms)
        })
        .collect()
}
