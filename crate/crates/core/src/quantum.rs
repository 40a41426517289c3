//! Exact three-qubit state-vector machinery.
//!
//! Basis states are ordered lexicographically over `(s1, s2, s3)` with `+z`
//! before `-z`, i.e. index `= b1 << 2 | b2 << 1 | b3` where `b = 0` for `+z`.
//! Measurement settings live on the equatorial plane and are given by an
//! angle `phi`; the eigenvectors of `cos(phi) σx + sin(phi) σy` are
//! `|±_phi⟩ = (|+z⟩ ± e^{i phi} |-z⟩) / √2`.

use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, TAU};
use core::fmt;
use core::ops::{Index, Mul, Neg};
use core::str::FromStr;

use alloc::format;
use alloc::string::String;
use num_complex::Complex64;

use crate::{Error, ALGEBRAIC_TOL, SUM_TOL};

pub type Amplitude = Complex64;

/// A measurement outcome (or a parity target), `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Sign {
    #[cfg_attr(feature = "serde", serde(rename = "+"))]
    Plus,
    #[cfg_attr(feature = "serde", serde(rename = "-"))]
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// `0` for `+1`, `1` for `-1`.
    pub fn bit(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn from_bit(bit: usize) -> Sign {
        if bit & 1 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }

    /// Sign closest to `x`, if `x` is within `tol` of `±1`.
    pub fn from_value(x: f64, tol: f64) -> Option<Sign> {
        if (x - 1.0).abs() <= tol {
            Some(Sign::Plus)
        } else if (x + 1.0).abs() <= tol {
            Some(Sign::Minus)
        } else {
            None
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        Sign::from_bit(self.bit() ^ 1)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// The two equatorial measurement bases the GHZ argument uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Basis {
    X,
    Y,
}

impl Basis {
    pub fn setting(self) -> Setting {
        match self {
            Basis::X => Setting::X,
            Basis::Y => Setting::Y,
        }
    }

    pub fn pauli(self) -> Pauli {
        match self {
            Basis::X => Pauli::X,
            Basis::Y => Pauli::Y,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Basis::X => 'x',
            Basis::Y => 'y',
        }
    }

    pub fn from_symbol(c: char) -> Option<Basis> {
        match c.to_ascii_lowercase() {
            'x' => Some(Basis::X),
            'y' => Some(Basis::Y),
            _ => None,
        }
    }
}

/// One of the three measuring parties (Alice, Bob, Charlie).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Party {
    One,
    Two,
    Three,
}

impl Party {
    pub const ALL: [Party; 3] = [Party::One, Party::Two, Party::Three];

    pub fn index(self) -> usize {
        match self {
            Party::One => 0,
            Party::Two => 1,
            Party::Three => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Party> {
        Party::ALL.get(i).copied()
    }

    /// 1-based party number.
    pub fn number(self) -> usize {
        self.index() + 1
    }

    pub fn observer(self) -> char {
        ['A', 'B', 'C'][self.index()]
    }

    /// The two other parties, in increasing order.
    pub fn others(self) -> [Party; 2] {
        match self {
            Party::One => [Party::Two, Party::Three],
            Party::Two => [Party::One, Party::Three],
            Party::Three => [Party::One, Party::Two],
        }
    }
}

/// Normalize an angle into `(-π, π]`. Angles already in range are returned
/// bit-for-bit unchanged.
pub fn normalize_angle(phi: f64) -> f64 {
    if phi > -PI && phi <= PI {
        return phi;
    }
    let mut r = libm::fmod(phi, TAU);
    if r > PI {
        r -= TAU;
    } else if r <= -PI {
        r += TAU;
    }
    r
}

/// Equatorial analyzer direction `cos(phi) x̂ + sin(phi) ŷ`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Setting {
    phi: f64,
}

impl Setting {
    pub const X: Setting = Setting { phi: 0.0 };
    pub const Y: Setting = Setting { phi: FRAC_PI_2 };

    pub fn new(phi: f64) -> Result<Setting, Error> {
        if !phi.is_finite() {
            return Err(Error::InvalidParam(format!("non-finite setting angle {phi}")));
        }
        Ok(Setting {
            phi: normalize_angle(phi),
        })
    }

    pub fn phi(self) -> f64 {
        self.phi
    }

    /// `Some` only for the exact canonical angles `0` and `π/2`.
    pub fn basis(self) -> Option<Basis> {
        if self.phi == 0.0 {
            Some(Basis::X)
        } else if self.phi == FRAC_PI_2 {
            Some(Basis::Y)
        } else {
            None
        }
    }
}

impl From<Basis> for Setting {
    fn from(b: Basis) -> Setting {
        b.setting()
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.basis() {
            Some(b) => write!(f, "{}", b.symbol()),
            None => write!(f, "{}", self.phi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SettingTriple {
    pub s1: Setting,
    pub s2: Setting,
    pub s3: Setting,
}

impl SettingTriple {
    pub fn new(s1: Setting, s2: Setting, s3: Setting) -> SettingTriple {
        SettingTriple { s1, s2, s3 }
    }

    pub fn from_bases(bases: [Basis; 3]) -> SettingTriple {
        SettingTriple::new(bases[0].into(), bases[1].into(), bases[2].into())
    }

    pub fn from_angles(phis: [f64; 3]) -> Result<SettingTriple, Error> {
        Ok(SettingTriple::new(
            Setting::new(phis[0])?,
            Setting::new(phis[1])?,
            Setting::new(phis[2])?,
        ))
    }

    pub fn setting(&self, party: Party) -> Setting {
        match party {
            Party::One => self.s1,
            Party::Two => self.s2,
            Party::Three => self.s3,
        }
    }

    pub fn with_setting(mut self, party: Party, s: Setting) -> SettingTriple {
        match party {
            Party::One => self.s1 = s,
            Party::Two => self.s2 = s,
            Party::Three => self.s3 = s,
        }
        self
    }

    pub fn angles(&self) -> [f64; 3] {
        [self.s1.phi, self.s2.phi, self.s3.phi]
    }

    /// The basis triple, when every setting is exactly `x̂` or `ŷ`.
    pub fn bases(&self) -> Option<[Basis; 3]> {
        Some([self.s1.basis()?, self.s2.basis()?, self.s3.basis()?])
    }

    /// True for the four triples used by the GHZ argument.
    pub fn is_canonical(&self) -> bool {
        canonical_triples().contains(self)
    }

    /// Short label: `xyy` for canonical-basis triples, comma-separated angles otherwise.
    pub fn label(&self) -> String {
        match self.bases() {
            Some(b) => b.iter().map(|b| b.symbol()).collect(),
            None => format!("{},{},{}", self.s1.phi, self.s2.phi, self.s3.phi),
        }
    }
}

impl fmt::Display for SettingTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Parses `xyy`-style basis strings or three comma-separated radian values.
impl FromStr for SettingTriple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.contains(',') {
            let mut phis = [0.0; 3];
            let mut n = 0;
            for part in s.split(',') {
                if n == 3 {
                    return Err(Error::Parse(format!("expected three angles in {s:?}")));
                }
                phis[n] = parse_angle(part)?;
                n += 1;
            }
            if n != 3 {
                return Err(Error::Parse(format!("expected three angles in {s:?}")));
            }
            return SettingTriple::from_angles(phis);
        }
        let chars: alloc::vec::Vec<char> = s.chars().collect();
        if chars.len() != 3 {
            return Err(Error::Parse(format!(
                "settings must be three of x/y or three comma-separated angles, got {s:?}"
            )));
        }
        let mut bases = [Basis::X; 3];
        for (b, c) in bases.iter_mut().zip(chars) {
            *b = Basis::from_symbol(c).ok_or_else(|| Error::Parse(format!("unknown basis {c:?} in {s:?}")))?;
        }
        Ok(SettingTriple::from_bases(bases))
    }
}

/// Parses a radian value: a plain number, or `pi`, `-pi`, `pi/2`, `3pi/4`,
/// `-pi/2` and similar rational multiples of π.
pub fn parse_angle(s: &str) -> Result<f64, Error> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        if !v.is_finite() {
            return Err(Error::Parse(format!("non-finite angle {t:?}")));
        }
        return Ok(v);
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t),
    };
    let (num_part, den) = match body.split_once('/') {
        Some((a, b)) => {
            let d: f64 = b.trim().parse().map_err(|_| Error::Parse(format!("bad angle {t:?}")))?;
            (a.trim(), d)
        }
        None => (body, 1.0),
    };
    let coeff = match num_part.strip_suffix("pi") {
        Some("") => 1.0,
        Some(c) => c
            .trim()
            .trim_end_matches('*')
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad angle {t:?}")))?,
        None => return Err(Error::Parse(format!("bad angle {t:?}"))),
    };
    if den == 0.0 {
        return Err(Error::Parse(format!("bad angle {t:?}")));
    }
    // `pi/2` gives exactly FRAC_PI_2.
    let v = coeff * PI / den;
    Ok(if neg { -v } else { v })
}

/// The four canonical triples `(x,x,x), (x,y,y), (y,x,y), (y,y,x)`.
pub fn canonical_triples() -> [SettingTriple; 4] {
    use Basis::{X, Y};
    [
        SettingTriple::from_bases([X, X, X]),
        SettingTriple::from_bases([X, Y, Y]),
        SettingTriple::from_bases([Y, X, Y]),
        SettingTriple::from_bases([Y, Y, X]),
    ]
}

/// Outcome record `(α, β, γ)` of the three parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OutcomeTriple {
    pub a: Sign,
    pub b: Sign,
    pub c: Sign,
}

impl OutcomeTriple {
    pub fn new(a: Sign, b: Sign, c: Sign) -> OutcomeTriple {
        OutcomeTriple { a, b, c }
    }

    /// Index in `0..8`, lexicographic with `+` first.
    pub fn index(self) -> usize {
        self.a.bit() << 2 | self.b.bit() << 1 | self.c.bit()
    }

    pub fn from_index(i: usize) -> OutcomeTriple {
        OutcomeTriple::new(Sign::from_bit(i >> 2), Sign::from_bit(i >> 1), Sign::from_bit(i))
    }

    /// All eight triples in index order.
    pub fn all() -> [OutcomeTriple; 8] {
        core::array::from_fn(OutcomeTriple::from_index)
    }

    pub fn get(self, party: Party) -> Sign {
        match party {
            Party::One => self.a,
            Party::Two => self.b,
            Party::Three => self.c,
        }
    }

    /// `αβγ`.
    pub fn parity(self) -> Sign {
        self.a * self.b * self.c
    }

    pub fn label(self) -> String {
        let mut s = String::with_capacity(3);
        s.push(self.a.symbol());
        s.push(self.b.symbol());
        s.push(self.c.symbol());
        s
    }
}

impl fmt::Display for OutcomeTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for OutcomeTriple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let signs: alloc::vec::Vec<Sign> = s
            .trim()
            .chars()
            .filter(|c| *c != ',')
            .map(|c| Sign::from_symbol(c).ok_or_else(|| Error::Parse(format!("bad outcome {s:?}"))))
            .collect::<Result<_, _>>()?;
        match signs.as_slice() {
            [a, b, c] => Ok(OutcomeTriple::new(*a, *b, *c)),
            _ => Err(Error::Parse(format!("outcome must be three signs, got {s:?}"))),
        }
    }
}

/// Probability over the eight outcome triples.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JointDistribution {
    probs: [f64; 8],
}

impl JointDistribution {
    /// Validates entries in `[-1e-12, 1 + 1e-12]` and total mass 1 within `1e-9`.
    pub fn new(probs: [f64; 8]) -> Result<JointDistribution, Error> {
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || !(-ALGEBRAIC_TOL..=1.0 + ALGEBRAIC_TOL).contains(&p) {
                return Err(Error::InvalidDistribution(format!(
                    "entry {} = {p} outside [0, 1]",
                    OutcomeTriple::from_index(i)
                )));
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!("total mass {total}")));
        }
        Ok(JointDistribution { probs })
    }

    pub fn point_mass(o: OutcomeTriple) -> JointDistribution {
        let mut probs = [0.0; 8];
        probs[o.index()] = 1.0;
        JointDistribution { probs }
    }

    pub fn prob(&self, o: OutcomeTriple) -> f64 {
        self.probs[o.index()]
    }

    pub fn probs(&self) -> &[f64; 8] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Copy with tiny negative round-off clamped to zero, for reporting.
    pub fn clamped(&self) -> [f64; 8] {
        self.probs.map(|p| if p < 0.0 { 0.0 } else { p })
    }

    /// Largest per-entry absolute difference.
    pub fn max_residual(&self, other: &JointDistribution) -> f64 {
        self.probs
            .iter()
            .zip(other.probs.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Index<OutcomeTriple> for JointDistribution {
    type Output = f64;
    fn index(&self, o: OutcomeTriple) -> &f64 {
        &self.probs[o.index()]
    }
}

/// `(P(+1), P(-1))` for one party.
pub fn marginal(dist: &JointDistribution, party: Party) -> (f64, f64) {
    let mut m = (0.0, 0.0);
    for o in OutcomeTriple::all() {
        match o.get(party) {
            Sign::Plus => m.0 += dist[o],
            Sign::Minus => m.1 += dist[o],
        }
    }
    m
}

/// Normalized three-qubit pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PureState {
    amps: [Amplitude; 8],
}

fn basis_index(bits: [usize; 3]) -> usize {
    bits[0] << 2 | bits[1] << 1 | bits[2]
}

fn site_bit(index: usize, site: Party) -> usize {
    (index >> (2 - site.index())) & 1
}

impl PureState {
    pub fn new(amps: [Amplitude; 8]) -> Result<PureState, Error> {
        if let Some(index) = amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(PureState { amps })
    }

    /// `|s1 s2 s3⟩` in the z basis.
    pub fn product_z(signs: [Sign; 3]) -> PureState {
        let mut amps = [Amplitude::new(0.0, 0.0); 8];
        amps[basis_index(signs.map(Sign::bit))] = Amplitude::new(1.0, 0.0);
        PureState { amps }
    }

    pub fn amps(&self) -> &[Amplitude; 8] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Amplitude {
        self.amps.iter().zip(other.amps.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_diff(&self, other: &PureState) -> f64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: Amplitude) -> [Amplitude; 8] {
        self.amps.map(|a| a * factor)
    }

    /// `(σ_{a1} ⊗ σ_{a2} ⊗ σ_{a3}) |self⟩`.
    pub fn apply_pauli_product(&self, axes: [Pauli; 3]) -> PureState {
        let mut amps = self.amps;
        for party in Party::ALL {
            amps = apply_single(&amps, party, axes[party.index()]);
        }
        PureState { amps }
    }

    /// `⟨self| σ^{(site)} |self⟩`.
    pub fn expectation(&self, site: Party, axis: Pauli) -> f64 {
        let applied = apply_single(&self.amps, site, axis);
        self.amps
            .iter()
            .zip(applied.iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<Amplitude>()
            .re
    }

    /// `e^{-i dt σ^{(site)}} |self⟩ = cos(dt)|self⟩ - i sin(dt) σ|self⟩`.
    pub fn rotate(&self, site: Party, axis: Pauli, dt: f64) -> PureState {
        let applied = apply_single(&self.amps, site, axis);
        let c = Amplitude::new(libm::cos(dt), 0.0);
        let s = Amplitude::new(0.0, -libm::sin(dt));
        let mut amps = self.amps;
        for (a, b) in amps.iter_mut().zip(applied.iter()) {
            *a = c * *a + s * b;
        }
        PureState { amps }
    }
}

/// `σ^{(site)}` acting on a raw amplitude vector.
fn apply_single(amps: &[Amplitude; 8], site: Party, axis: Pauli) -> [Amplitude; 8] {
    let flip = 1usize << (2 - site.index());
    let i = Amplitude::new(0.0, 1.0);
    let mut out = [Amplitude::new(0.0, 0.0); 8];
    for (idx, &a) in amps.iter().enumerate() {
        let bit = site_bit(idx, site);
        match axis {
            // X|0⟩ = |1⟩, X|1⟩ = |0⟩
            Pauli::X => out[idx ^ flip] += a,
            // Y|0⟩ = i|1⟩, Y|1⟩ = -i|0⟩
            Pauli::Y => out[idx ^ flip] += if bit == 0 { i * a } else { -i * a },
            Pauli::Z => out[idx] += if bit == 0 { a } else { -a },
        }
    }
    out
}

/// `(|+z+z+z⟩ - |-z-z-z⟩) / √2`.
pub fn ghz_state() -> PureState {
    let mut amps = [Amplitude::new(0.0, 0.0); 8];
    amps[0] = Amplitude::new(FRAC_1_SQRT_2, 0.0);
    amps[7] = Amplitude::new(-FRAC_1_SQRT_2, 0.0);
    PureState { amps }
}

pub fn apply_pauli_product(state: &PureState, axes: [Pauli; 3]) -> PureState {
    state.apply_pauli_product(axes)
}

/// Component `⟨+z| ±_phi⟩` or `⟨-z| ±_phi⟩` of an equatorial eigenvector.
fn eigvec_component(outcome: Sign, phi: f64, z_bit: usize) -> Amplitude {
    if z_bit == 0 {
        Amplitude::new(FRAC_1_SQRT_2, 0.0)
    } else {
        let s = outcome.value() * FRAC_1_SQRT_2;
        Amplitude::new(s * libm::cos(phi), s * libm::sin(phi))
    }
}

/// `⟨α_{φ1}, β_{φ2}, γ_{φ3} | state⟩`.
pub fn outcome_amplitude(state: &PureState, settings: &SettingTriple, o: OutcomeTriple) -> Amplitude {
    let phis = settings.angles();
    let mut acc = Amplitude::new(0.0, 0.0);
    for (idx, &amp) in state.amps.iter().enumerate() {
        let mut bra = Amplitude::new(1.0, 0.0);
        for party in Party::ALL {
            bra *= eigvec_component(o.get(party), phis[party.index()], site_bit(idx, party)).conj();
        }
        acc += bra * amp;
    }
    acc
}

/// Born-rule joint distribution of the three equatorial measurements.
pub fn born_joint(state: &PureState, settings: &SettingTriple) -> JointDistribution {
    let probs = core::array::from_fn(|i| outcome_amplitude(state, settings, OutcomeTriple::from_index(i)).norm_sqr());
    JointDistribution { probs }
}

/// Closed form `(1 - αβγ cos(φ1+φ2+φ3)) / 8` for the GHZ state. Used as an
/// independent cross-check of [`born_joint`].
pub fn closed_form_ghz(settings: &SettingTriple) -> JointDistribution {
    let [p1, p2, p3] = settings.angles();
    let c = libm::cos(p1 + p2 + p3);
    let probs = core::array::from_fn(|i| {
        let parity = OutcomeTriple::from_index(i).parity().value();
        (1.0 - parity * c) / 8.0
    });
    JointDistribution { probs }
}

/// Outcome of one `σ ⊗ σ ⊗ σ |ψ⟩ = λ |ψ⟩` check.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EigenCheck {
    pub operator: [Pauli; 3],
    pub expected: f64,
    /// `⟨ψ| O |ψ⟩`.
    pub eigenvalue: f64,
    /// Largest componentwise modulus of `O|ψ⟩ - λ|ψ⟩`.
    pub residual: f64,
}

/// The XXX, XYY, YXY and YYX identities on `state`, expecting `-1, +1, +1, +1`.
pub fn eigen_checks(state: &PureState) -> [EigenCheck; 4] {
    use Pauli::{X, Y};
    [([X, X, X], -1.0), ([X, Y, Y], 1.0), ([Y, X, Y], 1.0), ([Y, Y, X], 1.0)].map(|(operator, expected)| {
        let out = state.apply_pauli_product(operator);
        let target = PureState {
            amps: state.scaled(Amplitude::new(expected, 0.0)),
        };
        EigenCheck {
            operator,
            expected,
            eigenvalue: state.inner(&out).re,
            residual: out.max_diff(&target),
        }
    })
}

/// All 64 triples over `{0, π/2, π, -π/2}`, party 3 varying fastest.
pub fn equatorial_grid() -> alloc::vec::Vec<SettingTriple> {
    let angles = [0.0, FRAC_PI_2, PI, -FRAC_PI_2];
    let mut grid = alloc::vec::Vec::with_capacity(64);
    for a in angles {
        for b in angles {
            for c in angles {
                let s = |phi| Setting { phi };
                grid.push(SettingTriple::new(s(a), s(b), s(c)));
            }
        }
    }
    grid
}

/// Largest per-entry gap between [`born_joint`] on the GHZ state and
/// [`closed_form_ghz`] over `grid`.
pub fn closed_form_residual(grid: &[SettingTriple]) -> f64 {
    let g = ghz_state();
    grid.iter()
        .map(|s| born_joint(&g, s).max_residual(&closed_form_ghz(s)))
        .fold(0.0, f64::max)
}

/// `|⟨O_A⟩_after - ⟨O_A⟩_before|` where the state is evolved by
/// `e^{-i dt O_B}` and both operators are single-site Paulis.
pub fn commuting_mean_invariance(
    state: &PureState,
    site_a: Party,
    axis_a: Pauli,
    site_b: Party,
    axis_b: Pauli,
    dt: f64,
) -> f64 {
    let before = state.expectation(site_a, axis_a);
    let after = state.rotate(site_b, axis_b, dt).expectation(site_a, axis_a);
    (after - before).abs()
}
