//! Dense state-vector simulation over named registers: uniform superposition
//! preparation, per-register QFT, classical XOR oracles, projection and
//! seeded measurement sampling.
//!
//! Qubit ordering is register-major with the most significant qubit first
//! within a register: the first register in the layout owns the highest bits
//! of the global amplitude index, so |x₀⟩|x₁⟩… reads left to right exactly
//! like the basis labels. All index arithmetic in the crate relies on this
//! one convention.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use std::f64::consts::PI;
use std::io::{Read, Write};
use thiserror::Error;

pub const DEFAULT_QUBIT_CAP: u32 = 26;
const NORM_TOL: f64 = 1e-12;
/// Probabilities below this are treated as exactly zero by `project`.
pub const PROJECTION_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    registers: Vec<(String, u32)>,
    total_qubits: u32,
}

impl RegisterLayout {
    pub fn new(registers: &[(&str, u32)]) -> Result<Self, SimError> {
        Self::with_cap(registers, DEFAULT_QUBIT_CAP)
    }

    pub fn with_cap(registers: &[(&str, u32)], cap: u32) -> Result<Self, SimError> {
        let mut total = 0u32;
        let mut seen: Vec<&str> = Vec::new();
        for &(name, width) in registers {
            if width == 0 {
                return Err(SimError::ZeroWidth { name: name.to_string() });
            }
            if seen.contains(&name) {
                return Err(SimError::DuplicateName { name: name.to_string() });
            }
            seen.push(name);
            total += width;
        }
        if total > cap {
            return Err(SimError::CapExceeded { qubits: total, cap });
        }
        Ok(Self {
            registers: registers.iter().map(|&(n, w)| (n.to_string(), w)).collect(),
            total_qubits: total,
        })
    }

    pub fn total_qubits(&self) -> u32 {
        self.total_qubits
    }

    pub fn registers(&self) -> impl Iterator<Item = (&str, u32)> {
        self.registers.iter().map(|(n, w)| (n.as_str(), *w))
    }

    pub fn register_count(&self) -> usize {
        self.registers.len()
    }

    fn index_of(&self, name: &str) -> Result<usize, SimError> {
        self.registers
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| SimError::UnknownRegister { name: name.to_string() })
    }

    pub fn width(&self, name: &str) -> Result<u32, SimError> {
        Ok(self.registers[self.index_of(name)?].1)
    }

    /// Bit offset of a register from the least significant end of the global
    /// index (registers later in the layout sit lower).
    pub fn offset(&self, name: &str) -> Result<u32, SimError> {
        let idx = self.index_of(name)?;
        Ok(self.registers[idx + 1..].iter().map(|(_, w)| w).sum())
    }

    pub fn extract(&self, index: usize, name: &str) -> Result<u64, SimError> {
        let off = self.offset(name)?;
        let w = self.width(name)?;
        Ok(((index as u64) >> off) & ((1u64 << w) - 1))
    }

    /// All register values at a global index, in layout order.
    pub fn values(&self, index: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.registers.len());
        let mut off = self.total_qubits;
        for (_, w) in &self.registers {
            off -= w;
            out.push(((index as u64) >> off) & ((1u64 << w) - 1));
        }
        out
    }

    /// Global index with register `name` replaced by `value`.
    pub fn with_value(&self, index: usize, name: &str, value: u64) -> Result<usize, SimError> {
        let off = self.offset(name)?;
        let w = self.width(name)?;
        let mask = ((1u64 << w) - 1) << off;
        Ok(((index as u64 & !mask) | ((value << off) & mask)) as usize)
    }

    pub fn dimension(&self) -> usize {
        1usize << self.total_qubits
    }
}

#[derive(Debug, Clone)]
pub struct QuantumState {
    layout: RegisterLayout,
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    /// |0…0⟩ over the layout.
    pub fn zero(layout: RegisterLayout) -> Self {
        let mut amplitudes = vec![Complex64::ZERO; layout.dimension()];
        amplitudes[0] = Complex64::ONE;
        Self { layout, amplitudes }
    }

    pub fn from_amplitudes(layout: RegisterLayout, amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        if amplitudes.len() != layout.dimension() {
            return Err(SimError::DimensionMismatch {
                expected: layout.dimension(),
                found: amplitudes.len(),
            });
        }
        let state = Self { layout, amplitudes };
        state.check_normalized()?;
        Ok(state)
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn check_normalized(&self) -> Result<(), SimError> {
        let n = self.norm_sq();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(SimError::NotNormalized { norm_sq: n });
        }
        Ok(())
    }

    pub fn inner(&self, other: &QuantumState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Max |amplitude difference| against another state on the same layout.
    pub fn max_amp_distance(&self, other: &QuantumState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Prepare listed registers in uniform superposition, the rest in |0⟩.
pub fn init_uniform(layout: &RegisterLayout, uniform_registers: &[&str]) -> Result<QuantumState, SimError> {
    let mut uniform_bits = 0u32;
    let mut mask = 0u64;
    for name in uniform_registers {
        let off = layout.offset(name)?;
        let w = layout.width(name)?;
        uniform_bits += w;
        mask |= ((1u64 << w) - 1) << off;
    }
    let amp = (1.0 / f64::powi(2.0, uniform_bits as i32)).sqrt();
    let mut amplitudes = vec![Complex64::ZERO; layout.dimension()];
    let mut idx = 0u64;
    // walk exactly the indices whose non-uniform registers are zero
    loop {
        amplitudes[idx as usize] = Complex64::new(amp, 0.0);
        idx = idx.wrapping_sub(mask) & mask; // next subset of mask
        if idx == 0 {
            break;
        }
    }
    Ok(QuantumState { layout: layout.clone(), amplitudes })
}

/// The phase-kickback register state (1/√N₀)·Σₐ e^{i2πa/N₀}|a⟩ for
/// N₀ = 2^width; width 1 gives (|0⟩−|1⟩)/√2.
pub fn prepare_phase_register(width: u32) -> Vec<Complex64> {
    let n0 = 1usize << width;
    let norm = 1.0 / (n0 as f64).sqrt();
    (0..n0)
        .map(|a| Complex64::from_polar(norm, 2.0 * PI * a as f64 / n0 as f64))
        .collect()
}

/// Tensor a prepared register state into a register currently in |0⟩ on every
/// branch. Errors if any amplitude already lives outside register value 0.
pub fn load_register(state: &mut QuantumState, name: &str, amps: &[Complex64]) -> Result<(), SimError> {
    let layout = state.layout.clone();
    let w = layout.width(name)?;
    if amps.len() != 1usize << w {
        return Err(SimError::DimensionMismatch { expected: 1usize << w, found: amps.len() });
    }
    for (idx, a) in state.amplitudes.iter().enumerate() {
        if layout.extract(idx, name)? != 0 && a.norm_sqr() > NORM_TOL * NORM_TOL {
            return Err(SimError::RegisterNotZero { name: name.to_string() });
        }
    }
    let mut out = vec![Complex64::ZERO; state.amplitudes.len()];
    for (idx, &a) in state.amplitudes.iter().enumerate() {
        if a == Complex64::ZERO {
            continue;
        }
        for (v, &reg_amp) in amps.iter().enumerate() {
            let target = layout.with_value(idx, name, v as u64)?;
            out[target] = a * reg_amp;
        }
    }
    state.amplitudes = out;
    Ok(())
}

/// Hadamard on one global qubit position (0 = least significant).
pub fn apply_hadamard_qubit(state: &mut QuantumState, qubit: u32) {
    let stride = 1usize << qubit;
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let dim = state.amplitudes.len();
    let mut idx = 0usize;
    while idx < dim {
        if idx & stride == 0 {
            let a = state.amplitudes[idx];
            let b = state.amplitudes[idx | stride];
            state.amplitudes[idx] = (a + b) * inv_sqrt2;
            state.amplitudes[idx | stride] = (a - b) * inv_sqrt2;
        }
        idx += 1;
    }
}

/// Hadamard on every qubit of a register.
pub fn apply_hadamard_register(state: &mut QuantumState, name: &str) -> Result<(), SimError> {
    let off = state.layout.offset(name)?;
    let w = state.layout.width(name)?;
    for q in off..off + w {
        apply_hadamard_qubit(state, q);
    }
    Ok(())
}

/// QFT (or inverse) on one register:
/// QFT|j⟩ = (1/√D)·Σₖ e^{+i2πjk/D}|k⟩ with D = 2^width.
pub fn apply_qft(state: &mut QuantumState, name: &str, inverse: bool) -> Result<(), SimError> {
    let off = state.layout.offset(name)?;
    let w = state.layout.width(name)?;
    let d = 1usize << w;
    let sign = if inverse { -1.0 } else { 1.0 };
    // precompute the d distinct unit roots; kernel entry (j,k) is root[(j*k) % d]
    let norm = 1.0 / (d as f64).sqrt();
    let roots: Vec<Complex64> = (0..d)
        .map(|r| Complex64::from_polar(norm, sign * 2.0 * PI * r as f64 / d as f64))
        .collect();
    let root_mask = d - 1; // d is a power of two
    let low_mask = (1usize << off) - 1;
    let dim = state.amplitudes.len();
    let blocks = dim >> w;
    let mut scratch = vec![Complex64::ZERO; d];
    for block in 0..blocks {
        let lo = block & low_mask;
        let hi = (block & !low_mask) << w;
        let base = hi | lo;
        for (v, s) in scratch.iter_mut().enumerate() {
            *s = state.amplitudes[base | (v << off)];
        }
        for k in 0..d {
            let mut acc = Complex64::ZERO;
            for (j, s) in scratch.iter().enumerate() {
                acc += roots[(j * k) & root_mask] * s;
            }
            state.amplitudes[base | (k << off)] = acc;
        }
    }
    Ok(())
}

/// Multiply each basis amplitude by e^{iφ} where φ is a function of the
/// register values (layout order).
pub fn apply_phase_fn(state: &mut QuantumState, phase: impl Fn(&[u64]) -> f64 + Sync) {
    let layout = state.layout.clone();
    use rayon::prelude::*;
    state
        .amplitudes
        .par_iter_mut()
        .enumerate()
        .for_each(|(idx, a)| {
            if *a != Complex64::ZERO {
                *a *= Complex64::from_polar(1.0, phase(&layout.values(idx)));
            }
        });
}

/// Classical XOR oracle |…,t,…⟩ → |…,t ⊕ f(values),…⟩ on register `target`.
/// `f` receives all register values in layout order with the target's entry
/// zeroed, so it cannot depend on the target.
pub fn apply_xor_oracle(
    state: &mut QuantumState,
    target: &str,
    f: impl Fn(&[u64]) -> u64,
) -> Result<(), SimError> {
    let layout = state.layout.clone();
    let reg_idx = layout.index_of(target)?;
    let w = layout.width(target)?;
    let mask = (1u64 << w) - 1;
    let mut out = vec![Complex64::ZERO; state.amplitudes.len()];
    for (idx, &a) in state.amplitudes.iter().enumerate() {
        if a == Complex64::ZERO {
            continue;
        }
        let mut vals = layout.values(idx);
        let t = vals[reg_idx];
        vals[reg_idx] = 0;
        let image = layout.with_value(idx, target, t ^ (f(&vals) & mask))?;
        out[image] = a;
    }
    state.amplitudes = out;
    Ok(())
}

/// Project a register onto a basis value: returns the renormalized state and
/// the Born probability. Probabilities below `PROJECTION_FLOOR` signal an
/// empty branch.
pub fn project(state: &QuantumState, name: &str, value: u64) -> Result<(QuantumState, f64), SimError> {
    let layout = &state.layout;
    let w = layout.width(name)?;
    if value >= 1u64 << w {
        return Err(SimError::ValueOutOfRange { name: name.to_string(), value, width: w });
    }
    let mut prob = 0.0;
    for (idx, a) in state.amplitudes.iter().enumerate() {
        if layout.extract(idx, name)? == value {
            prob += a.norm_sqr();
        }
    }
    if prob < PROJECTION_FLOOR {
        return Err(SimError::EmptyBranch { name: name.to_string(), value });
    }
    let scale = 1.0 / prob.sqrt();
    let amplitudes = state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(idx, &a)| {
            if layout.extract(idx, name).unwrap() == value {
                a * scale
            } else {
                Complex64::ZERO
            }
        })
        .collect();
    Ok((QuantumState { layout: layout.clone(), amplitudes }, prob))
}

/// Marginal Born distribution of one register.
pub fn marginal(state: &QuantumState, name: &str) -> Result<Vec<f64>, SimError> {
    let layout = &state.layout;
    let w = layout.width(name)?;
    let off = layout.offset(name)?;
    let mut dist = vec![0.0; 1usize << w];
    let mask = (1usize << w) - 1;
    for (idx, a) in state.amplitudes.iter().enumerate() {
        dist[(idx >> off) & mask] += a.norm_sqr();
    }
    Ok(dist)
}

/// Reusable inverse-CDF sampler over a state's Born distribution.
pub struct Sampler<'a> {
    state: &'a QuantumState,
    cumulative: Vec<f64>,
    total: f64,
}

impl<'a> Sampler<'a> {
    pub fn new(state: &'a QuantumState) -> Self {
        let mut cumulative = Vec::with_capacity(state.amplitudes.len());
        let mut acc = 0.0;
        for a in &state.amplitudes {
            acc += a.norm_sqr();
            cumulative.push(acc);
        }
        Self { state, cumulative, total: acc }
    }

    /// Draw one global basis index.
    pub fn draw_index(&self, rng: &mut impl Rng) -> usize {
        let u: f64 = rng.random_range(0.0..self.total);
        let mut idx = match self.cumulative.binary_search_by(|c| c.partial_cmp(&u).unwrap()) {
            Ok(i) => i + 1,
            Err(i) => i,
        }
        .min(self.cumulative.len() - 1);
        // landing exactly on a boundary can select a zero-weight index
        while self.state.amplitudes[idx].norm_sqr() == 0.0 && idx + 1 < self.cumulative.len() {
            idx += 1;
        }
        idx
    }

    /// Draw one shot and read out the listed registers.
    pub fn draw(&self, rng: &mut impl Rng, registers: &[&str]) -> Result<Vec<u64>, SimError> {
        let idx = self.draw_index(rng);
        registers
            .iter()
            .map(|name| self.state.layout.extract(idx, name))
            .collect()
    }
}

/// Seeded Born sampling of the joint distribution over the listed registers.
/// Returns one value-vector per shot, in register-list order.
pub fn measure(
    state: &QuantumState,
    registers: &[&str],
    shots: u64,
    seed: u64,
) -> Result<Vec<Vec<u64>>, SimError> {
    for name in registers {
        state.layout.index_of(name)?;
    }
    let sampler = Sampler::new(state);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..shots).map(|_| sampler.draw(&mut rng, registers)).collect()
}

/// Check that a register is unentangled with the rest, in the exact product
/// state `expected`, and return the state on the remaining registers.
pub fn split_factor(
    state: &QuantumState,
    name: &str,
    expected: &[Complex64],
    tol: f64,
) -> Result<QuantumState, SimError> {
    let layout = &state.layout;
    let w = layout.width(name)?;
    let off = layout.offset(name)?;
    if expected.len() != 1usize << w {
        return Err(SimError::DimensionMismatch { expected: 1usize << w, found: expected.len() });
    }
    // pick the largest-weight expected component as the reference slice
    let (ref_v, ref_amp) = expected
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().partial_cmp(&b.1.norm_sqr()).unwrap())
        .map(|(v, a)| (v, *a))
        .unwrap();
    let remaining: Vec<(&str, u32)> = layout
        .registers()
        .filter(|(n, _)| *n != name)
        .collect();
    let rest_layout = RegisterLayout::with_cap(&remaining, layout.total_qubits())?;
    let mut rest = vec![Complex64::ZERO; rest_layout.dimension()];
    let low_mask = (1usize << off) - 1;
    for (rest_idx, r) in rest.iter_mut().enumerate() {
        let lo = rest_idx & low_mask;
        let hi = (rest_idx & !low_mask) << w;
        *r = state.amplitudes[hi | (ref_v << off) | lo] / ref_amp;
    }
    // verify the product structure everywhere
    for (idx, &a) in state.amplitudes.iter().enumerate() {
        let v = (idx >> off) & ((1usize << w) - 1);
        let lo = idx & low_mask;
        let hi = (idx >> (off + w)) << off;
        let rest_idx = hi | lo;
        let predicted = rest[rest_idx] * expected[v];
        if (a - predicted).norm() > tol {
            return Err(SimError::NotProduct { name: name.to_string() });
        }
    }
    QuantumState::from_amplitudes(rest_layout, rest)
}

// ---------------------------------------------------------------------------
// Snapshot serialization: magic, header, little-endian complex doubles.
// Format (documented in README): b"QRSNAP01", u32 register count, then per
// register u16 name length + name bytes + u16 width, then u64 amplitude count
// and (re, im) f64 pairs, everything little endian.
// ---------------------------------------------------------------------------

const SNAPSHOT_MAGIC: &[u8; 8] = b"QRSNAP01";

pub fn write_snapshot(state: &QuantumState, mut w: impl Write) -> std::io::Result<()> {
    w.write_all(SNAPSHOT_MAGIC)?;
    w.write_all(&(state.layout.register_count() as u32).to_le_bytes())?;
    for (name, width) in state.layout.registers() {
        let bytes = name.as_bytes();
        w.write_all(&(bytes.len() as u16).to_le_bytes())?;
        w.write_all(bytes)?;
        w.write_all(&(width as u16).to_le_bytes())?;
    }
    w.write_all(&(state.amplitudes.len() as u64).to_le_bytes())?;
    for a in &state.amplitudes {
        w.write_all(&a.re.to_le_bytes())?;
        w.write_all(&a.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_snapshot(mut r: impl Read) -> Result<QuantumState, SimError> {
    let io = |e: std::io::Error| SimError::Snapshot { message: e.to_string() };
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic).map_err(io)?;
    if &magic != SNAPSHOT_MAGIC {
        return Err(SimError::Snapshot { message: "bad magic".into() });
    }
    let mut u32buf = [0u8; 4];
    r.read_exact(&mut u32buf).map_err(io)?;
    let reg_count = u32::from_le_bytes(u32buf);
    let mut registers: Vec<(String, u32)> = Vec::with_capacity(reg_count as usize);
    for _ in 0..reg_count {
        let mut u16buf = [0u8; 2];
        r.read_exact(&mut u16buf).map_err(io)?;
        let len = u16::from_le_bytes(u16buf) as usize;
        let mut name = vec![0u8; len];
        r.read_exact(&mut name).map_err(io)?;
        r.read_exact(&mut u16buf).map_err(io)?;
        let width = u16::from_le_bytes(u16buf) as u32;
        registers.push((
            String::from_utf8(name).map_err(|e| SimError::Snapshot { message: e.to_string() })?,
            width,
        ));
    }
    let refs: Vec<(&str, u32)> = registers.iter().map(|(n, w)| (n.as_str(), *w)).collect();
    let layout = RegisterLayout::new(&refs)?;
    let mut u64buf = [0u8; 8];
    r.read_exact(&mut u64buf).map_err(io)?;
    let count = u64::from_le_bytes(u64buf) as usize;
    if count != layout.dimension() {
        return Err(SimError::Snapshot { message: format!("amplitude count {count} does not match layout") });
    }
    let mut amplitudes = Vec::with_capacity(count);
    for _ in 0..count {
        let mut re = [0u8; 8];
        let mut im = [0u8; 8];
        r.read_exact(&mut re).map_err(io)?;
        r.read_exact(&mut im).map_err(io)?;
        amplitudes.push(Complex64::new(f64::from_le_bytes(re), f64::from_le_bytes(im)));
    }
    QuantumState::from_amplitudes(layout, amplitudes)
}

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("register '{name}' has zero width")]
    ZeroWidth { name: String },
    #[error("duplicate register name '{name}'")]
    DuplicateName { name: String },
    #[error("{qubits} qubits exceed the dense-simulation cap of {cap}")]
    CapExceeded { qubits: u32, cap: u32 },
    #[error("unknown register '{name}'")]
    UnknownRegister { name: String },
    #[error("amplitude vector has {found} entries, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state is not normalized: |psi|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("register '{name}' must be |0> before loading")]
    RegisterNotZero { name: String },
    #[error("value {value} does not fit register '{name}' of width {width}")]
    ValueOutOfRange { name: String, value: u64, width: u32 },
    #[error("projection of '{name}' onto {value} has no support (empty branch)")]
    EmptyBranch { name: String, value: u64 },
    #[error("register '{name}' is entangled or not in the expected factor state")]
    NotProduct { name: String },
    #[error("snapshot error: {message}")]
    Snapshot { message: String },
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn layout2() -> RegisterLayout {
        RegisterLayout::new(&[("a", 2), ("b", 1)]).unwrap()
    }

    #[test]
    fn layout_indexing_is_register_major() {
        let l = layout2();
        assert_eq!(l.total_qubits(), 3);
        assert_eq!(l.offset("a").unwrap(), 1);
        assert_eq!(l.offset("b").unwrap(), 0);
        // index 0b101 -> a = 0b10, b = 1
        assert_eq!(l.extract(0b101, "a").unwrap(), 0b10);
        assert_eq!(l.extract(0b101, "b").unwrap(), 1);
        assert_eq!(l.values(0b101), vec![0b10, 1]);
        assert_eq!(l.with_value(0b101, "a", 0b01).unwrap(), 0b011);
    }

    #[test]
    fn layout_rejects_duplicates_and_cap() {
        assert!(RegisterLayout::new(&[("a", 2), ("a", 1)]).is_err());
        assert!(RegisterLayout::new(&[("a", 27)]).is_err());
        assert!(RegisterLayout::with_cap(&[("a", 27)], 27).is_ok());
        assert!(RegisterLayout::new(&[("a", 0)]).is_err());
    }

    #[test]
    fn init_uniform_examples() {
        // one 2-qubit register
        let l = RegisterLayout::new(&[("r", 2)]).unwrap();
        let s = init_uniform(&l, &["r"]).unwrap();
        for a in s.amplitudes() {
            assert_abs_diff_eq!(a.re, 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-15);
        }
        // no registers listed -> |0...0>
        let s = init_uniform(&l, &[]).unwrap();
        assert_eq!(s.amplitudes()[0], Complex64::ONE);
        assert!(s.amplitudes()[1..].iter().all(|a| *a == Complex64::ZERO));
        // mixed: uniform on a only
        let l = layout2();
        let s = init_uniform(&l, &["a"]).unwrap();
        let expect = 0.5;
        for idx in 0..8 {
            let b = l.extract(idx, "b").unwrap();
            let expected = if b == 0 { expect } else { 0.0 };
            assert_abs_diff_eq!(s.amplitudes()[idx].re, expected, epsilon = 1e-15);
        }
        assert!(init_uniform(&l, &["nope"]).is_err());
    }

    #[test]
    fn uniform_amplitude_matches_hadamards() {
        let l = RegisterLayout::new(&[("x", 3), ("y", 2)]).unwrap();
        let fast = init_uniform(&l, &["x", "y"]).unwrap();
        let mut gates = QuantumState::zero(l);
        for q in 0..5 {
            apply_hadamard_qubit(&mut gates, q);
        }
        assert!(fast.max_amp_distance(&gates) < 1e-14);
    }

    #[test]
    fn phase_register_values() {
        let one = prepare_phase_register(1);
        assert_abs_diff_eq!(one[0].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(one[1].re, -std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(one[1].im, 0.0, epsilon = 1e-12);
        let two = prepare_phase_register(2);
        let expect = [
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, -0.5),
        ];
        for (a, e) in two.iter().zip(expect) {
            assert!((a - e).norm() < 1e-12);
        }
        // construction is deterministic up to (trivially, exactly) global phase
        assert_eq!(prepare_phase_register(2), prepare_phase_register(2));
    }

    #[test]
    fn qft_roundtrip_and_defining_property() {
        let l = RegisterLayout::new(&[("r", 4)]).unwrap();
        // QFT on |0> is uniform
        let mut s = QuantumState::zero(l.clone());
        apply_qft(&mut s, "r", false).unwrap();
        let uniform = init_uniform(&l, &["r"]).unwrap();
        assert!(s.max_amp_distance(&uniform) < 1e-12);
        // QFT then inverse is identity
        apply_qft(&mut s, "r", true).unwrap();
        apply_qft(&mut s, "r", false).unwrap();
        assert!(s.max_amp_distance(&uniform) < 1e-12);
        // inverse QFT maps the frequency state to |k>, all k, width up to 6
        for w in 1..=6u32 {
            let l = RegisterLayout::new(&[("r", w)]).unwrap();
            let d = 1usize << w;
            for k in 0..d {
                let amps: Vec<Complex64> = (0..d)
                    .map(|y| {
                        Complex64::from_polar(
                            1.0 / (d as f64).sqrt(),
                            2.0 * PI * (k * y) as f64 / d as f64,
                        )
                    })
                    .collect();
                let mut s = QuantumState::from_amplitudes(l.clone(), amps).unwrap();
                apply_qft(&mut s, "r", true).unwrap();
                for (idx, a) in s.amplitudes().iter().enumerate() {
                    let expect = if idx == k { 1.0 } else { 0.0 };
                    assert!((a.norm() - expect).abs() < 1e-10, "w={w} k={k} idx={idx}");
                }
            }
        }
    }

    #[test]
    fn qft_acts_locally() {
        // an operation on one register leaves the reduced state of the
        // complement unchanged, on an entangled 3-register toy state
        let l = RegisterLayout::new(&[("x", 2), ("y", 2), ("z", 1)]).unwrap();
        let mut s = init_uniform(&l, &["x"]).unwrap();
        apply_xor_oracle(&mut s, "y", |vals| vals[0].wrapping_mul(3)).unwrap();
        apply_xor_oracle(&mut s, "z", |vals| vals[0] & 1).unwrap();
        let before_y = marginal(&s, "y").unwrap();
        let before_z = marginal(&s, "z").unwrap();
        apply_qft(&mut s, "x", false).unwrap();
        apply_hadamard_register(&mut s, "x").unwrap();
        for (name, before) in [("y", before_y), ("z", before_z)] {
            let after = marginal(&s, name).unwrap();
            for (b, a) in before.iter().zip(&after) {
                assert_abs_diff_eq!(b, a, epsilon = 1e-12);
            }
        }
        assert_abs_diff_eq!(s.norm_sq(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn qft_preserves_inner_products() {
        use rand::RngCore;
        let l = RegisterLayout::new(&[("r", 3)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let random_state = |rng: &mut ChaCha8Rng| {
            let mut v: Vec<Complex64> = (0..8)
                .map(|_| {
                    Complex64::new(
                        rng.next_u64() as f64 / u64::MAX as f64 - 0.5,
                        rng.next_u64() as f64 / u64::MAX as f64 - 0.5,
                    )
                })
                .collect();
            let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|a| *a /= n);
            QuantumState::from_amplitudes(l.clone(), v).unwrap()
        };
        for _ in 0..10 {
            let a = random_state(&mut rng);
            let b = random_state(&mut rng);
            let before = a.inner(&b);
            let mut qa = a.clone();
            let mut qb = b.clone();
            apply_qft(&mut qa, "r", false).unwrap();
            apply_qft(&mut qb, "r", false).unwrap();
            let after = qa.inner(&qb);
            assert!((before - after).norm() < 1e-12);
        }
    }

    #[test]
    fn project_examples() {
        let l = RegisterLayout::new(&[("q", 1)]).unwrap();
        let s = init_uniform(&l, &["q"]).unwrap();
        let (post, p) = project(&s, "q", 0).unwrap();
        assert_abs_diff_eq!(p, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(post.amplitudes()[0].re, 1.0, epsilon = 1e-12);
        // impossible value -> empty branch
        let zero = QuantumState::zero(l);
        assert!(matches!(project(&zero, "q", 1), Err(SimError::EmptyBranch { .. })));
    }

    #[test]
    fn measurement_is_seeded_and_deterministic() {
        let l = RegisterLayout::new(&[("r", 2)]).unwrap();
        let s = init_uniform(&l, &["r"]).unwrap();
        let a = measure(&s, &["r"], 100, 42).unwrap();
        let b = measure(&s, &["r"], 100, 42).unwrap();
        assert_eq!(a, b);
        let c = measure(&s, &["r"], 100, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn measurement_of_basis_state_is_deterministic() {
        let l = RegisterLayout::new(&[("r", 6)]).unwrap();
        let mut s = QuantumState::zero(l.clone());
        // move to |011010>
        s.amplitudes_mut()[0] = Complex64::ZERO;
        s.amplitudes_mut()[0b011010] = Complex64::ONE;
        for shot in measure(&s, &["r"], 50, 1).unwrap() {
            assert_eq!(shot, vec![0b011010]);
        }
    }

    #[test]
    fn measurement_frequencies_within_binomial_bound() {
        let l = RegisterLayout::new(&[("r", 2)]).unwrap();
        let s = init_uniform(&l, &["r"]).unwrap();
        let shots = 100_000u64;
        let samples = measure(&s, &["r"], shots, 7).unwrap();
        let mut counts = [0u64; 4];
        for v in samples {
            counts[v[0] as usize] += 1;
        }
        let sigma = (0.25 * 0.75 / shots as f64).sqrt();
        for c in counts {
            let freq = c as f64 / shots as f64;
            assert!((freq - 0.25).abs() < 4.0 * sigma, "freq {freq}");
        }
    }

    #[test]
    fn xor_oracle_is_reversible() {
        let l = RegisterLayout::new(&[("x", 2), ("out", 2)]).unwrap();
        let mut s = init_uniform(&l, &["x"]).unwrap();
        let before = s.clone();
        let f = |vals: &[u64]| vals[0].wrapping_add(1) & 0b11;
        apply_xor_oracle(&mut s, "out", f).unwrap();
        assert!(s.max_amp_distance(&before) > 0.1);
        apply_xor_oracle(&mut s, "out", f).unwrap();
        assert!(s.max_amp_distance(&before) < 1e-14);
    }

    #[test]
    fn split_factor_detects_products_and_entanglement() {
        let l = RegisterLayout::new(&[("x", 1), ("a", 1)]).unwrap();
        let mut s = init_uniform(&l, &["x"]).unwrap();
        let minus = prepare_phase_register(1);
        load_register(&mut s, "a", &minus).unwrap();
        let rest = split_factor(&s, "a", &minus, 1e-12).unwrap();
        assert_eq!(rest.layout().total_qubits(), 1);
        assert_abs_diff_eq!(rest.amplitudes()[0].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        // entangle and verify detection
        let mut bell = QuantumState::zero(RegisterLayout::new(&[("x", 1), ("a", 1)]).unwrap());
        bell.amplitudes_mut()[0b00] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        bell.amplitudes_mut()[0b11] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        bell.amplitudes_mut()[0b01] = Complex64::ZERO;
        bell.amplitudes_mut()[0b10] = Complex64::ZERO;
        assert!(matches!(
            split_factor(&bell, "a", &[Complex64::ONE, Complex64::ZERO], 1e-9),
            Err(SimError::NotProduct { .. })
        ));
    }

    #[test]
    fn snapshot_round_trip() {
        let l = RegisterLayout::new(&[("x", 2), ("anc", 1)]).unwrap();
        let mut s = init_uniform(&l, &["x"]).unwrap();
        apply_qft(&mut s, "x", false).unwrap();
        let mut buf = Vec::new();
        write_snapshot(&s, &mut buf).unwrap();
        let back = read_snapshot(buf.as_slice()).unwrap();
        assert_eq!(back.layout(), s.layout());
        assert!(back.max_amp_distance(&s) < 1e-15);
        assert!(read_snapshot(&buf[..10]).is_err());
    }
}
