//! One- and two-qubit Clifford groups, enumerated by breadth-first closure over
//! {H, S, CNOT} with phase canonicalization.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channels::{unitary_channel, QuantumChannel};
use crate::error::{Error, Result};
use crate::pauli::cnot;
use crate::qmath::{c, tol, ComplexMatrix};
use crate::simulator::RngStream;

/// Environment variable naming a directory for the on-disk group cache.
pub const CACHE_DIR_ENV: &str = "URBENCH_CACHE_DIR";
const CACHE_VERSION: u32 = 1;
const QUANTIZATION: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasicGate {
    H(u8),
    S(u8),
    Cnot01,
    Cnot10,
}

impl fmt::Display for BasicGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasicGate::H(q) => write!(f, "H_{q}"),
            BasicGate::S(q) => write!(f, "S_{q}"),
            BasicGate::Cnot01 => write!(f, "CNOT_01"),
            BasicGate::Cnot10 => write!(f, "CNOT_10"),
        }
    }
}

impl BasicGate {
    /// Matrix on `n` qubits.
    pub fn matrix(self, n: usize) -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = ComplexMatrix::from_real(2, 2, &[s, s, s, -s]).expect("2x2 literal");
        let phase = ComplexMatrix::diag(&[c(1.0, 0.0), c(0.0, 1.0)]);
        let on_qubit = |g: ComplexMatrix, q: u8| -> ComplexMatrix {
            match (n, q) {
                (1, _) => g,
                (_, 0) => g.kron(&ComplexMatrix::identity(2)),
                _ => ComplexMatrix::identity(2).kron(&g),
            }
        };
        match self {
            BasicGate::H(q) => on_qubit(h, q),
            BasicGate::S(q) => on_qubit(phase, q),
            BasicGate::Cnot01 => cnot(0, 1),
            BasicGate::Cnot10 => cnot(1, 0),
        }
    }

    fn generators(n: usize) -> Vec<BasicGate> {
        match n {
            1 => vec![BasicGate::H(0), BasicGate::S(0)],
            _ => vec![BasicGate::H(0), BasicGate::H(1), BasicGate::S(0), BasicGate::S(1), BasicGate::Cnot01],
        }
    }
}

/// Product of a gate word, first gate applied first.
pub fn replay_word(word: &[BasicGate], n: usize) -> ComplexMatrix {
    word.iter().fold(ComplexMatrix::identity(1 << n), |acc, g| g.matrix(n).mul_unchecked(&acc))
}

#[derive(Clone, Debug)]
pub struct CliffordGate {
    n: usize,
    matrix: ComplexMatrix,
    word: Vec<BasicGate>,
}

impl CliffordGate {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn word(&self) -> &[BasicGate] {
        &self.word
    }

    pub fn word_string(&self) -> String {
        self.word.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" ")
    }
}

/// Scales `u` by a unit phase so its first entry with modulus above
/// [`tol::PHASE_PIVOT`] (row-major) is real and positive.
pub fn canonical_form(u: &ComplexMatrix) -> ComplexMatrix {
    match u.entries().iter().find(|z| z.norm() > tol::PHASE_PIVOT) {
        Some(z) => u.scale(z.conj() / z.norm()),
        None => u.clone(),
    }
}

fn quantize(m: &ComplexMatrix) -> Vec<i64> {
    m.entries()
        .iter()
        .flat_map(|z| [(z.re * QUANTIZATION).round() as i64, (z.im * QUANTIZATION).round() as i64])
        .collect()
}

pub struct CliffordGroup {
    n: usize,
    members: Vec<CliffordGate>,
    index: HashMap<Vec<i64>, usize>,
}

impl fmt::Debug for CliffordGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CliffordGroup").field("n", &self.n).field("len", &self.members.len()).finish()
    }
}

impl CliffordGroup {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[CliffordGate] {
        &self.members
    }

    pub fn get(&self, id: usize) -> Option<&CliffordGate> {
        self.members.get(id)
    }

    /// Member id of `u` up to global phase.
    pub fn find(&self, u: &ComplexMatrix) -> Option<usize> {
        self.index.get(&quantize(&canonical_form(u))).copied()
    }

    fn from_members(n: usize, members: Vec<CliffordGate>) -> Self {
        let index = members.iter().enumerate().map(|(i, g)| (quantize(&g.matrix), i)).collect();
        Self { n, members, index }
    }

    /// Process-wide shared group; consults the on-disk cache when
    /// `URBENCH_CACHE_DIR` is set.
    pub fn shared(n: usize) -> Result<&'static CliffordGroup> {
        static ONE: OnceLock<CliffordGroup> = OnceLock::new();
        static TWO: OnceLock<CliffordGroup> = OnceLock::new();
        let slot = match n {
            1 => &ONE,
            2 => &TWO,
            other => return Err(Error::UnsupportedQubits(other)),
        };
        Ok(slot.get_or_init(|| match std::env::var_os(CACHE_DIR_ENV) {
            Some(dir) => load_or_build(Path::new(&dir), n).expect("n validated above"),
            None => generate_group(n).expect("n validated above"),
        }))
    }
}

pub fn generate_group(n: usize) -> Result<CliffordGroup> {
    if n != 1 && n != 2 {
        return Err(Error::UnsupportedQubits(n));
    }
    let gens: Vec<(BasicGate, ComplexMatrix)> =
        BasicGate::generators(n).into_iter().map(|g| (g, g.matrix(n))).collect();
    let identity = CliffordGate { n, matrix: ComplexMatrix::identity(1 << n), word: Vec::new() };
    let mut index = HashMap::new();
    index.insert(quantize(&identity.matrix), 0usize);
    let mut members = vec![identity];
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        for (g, gm) in &gens {
            let next = canonical_form(&gm.mul_unchecked(&members[id].matrix));
            let key = quantize(&next);
            if index.contains_key(&key) {
                continue;
            }
            let mut word = members[id].word.clone();
            word.push(*g);
            index.insert(key, members.len());
            queue.push_back(members.len());
            members.push(CliffordGate { n, matrix: next, word });
        }
    }
    Ok(CliffordGroup { n, members, index })
}

/// Uniform draw over all members.
pub fn sample_uniform<'g>(group: &'g CliffordGroup, rng: &mut RngStream) -> &'g CliffordGate {
    &group.members[rng.random_range(0..group.members.len())]
}

/// Uniform draw over all members except the identity.
pub fn sample_non_identity<'g>(group: &'g CliffordGroup, rng: &mut RngStream) -> &'g CliffordGate {
    &group.members[rng.random_range(1..group.members.len())]
}

pub fn gate_as_channel(g: &CliffordGate) -> QuantumChannel {
    unitary_channel(&g.matrix).expect("Clifford matrices are unitary")
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    word: Vec<BasicGate>,
    matrix: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    n: usize,
    checksum: String,
    members: Vec<CacheEntry>,
}

fn checksum(members: &[CacheEntry]) -> Result<String> {
    let bytes = serde_json::to_vec(members)?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

pub fn cache_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("clifford_n{n}_v{CACHE_VERSION}.json"))
}

fn read_cache(path: &Path, n: usize) -> Option<CliffordGroup> {
    let text = std::fs::read(path).ok()?;
    let file: CacheFile = serde_json::from_slice(&text).ok()?;
    if file.version != CACHE_VERSION || file.n != n || checksum(&file.members).ok()? != file.checksum {
        return None;
    }
    let d = 1usize << n;
    let members = file
        .members
        .into_iter()
        .map(|e| {
            let data = e.matrix.iter().map(|[re, im]| c(*re, *im)).collect();
            Some(CliffordGate { n, matrix: ComplexMatrix::new(d, d, data).ok()?, word: e.word })
        })
        .collect::<Option<Vec<_>>>()?;
    let expected = if n == 1 { 24 } else { 11520 };
    (members.len() == expected).then(|| CliffordGroup::from_members(n, members))
}

fn write_cache(path: &Path, group: &CliffordGroup) -> Result<()> {
    let members: Vec<CacheEntry> = group
        .members
        .iter()
        .map(|g| CacheEntry { word: g.word.clone(), matrix: g.matrix.entries().iter().map(|z| [z.re, z.im]).collect() })
        .collect();
    let file = CacheFile { version: CACHE_VERSION, n: group.n, checksum: checksum(&members)?, members };
    let dir = path.parent().unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer(&mut tmp, &file)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Loads the group from `dir`, regenerating (and rewriting) the cache file when
/// it is missing, from another version, or fails its checksum.
pub fn load_or_build(dir: &Path, n: usize) -> Result<CliffordGroup> {
    let path = cache_path(dir, n);
    if let Some(group) = read_cache(&path, n) {
        return Ok(group);
    }
    let group = generate_group(n)?;
    // a read-only cache directory is not fatal
    let _ = write_cache(&path, &group);
    Ok(group)
}
