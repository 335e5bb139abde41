//! One-dimensional transfer-matrix scattering model.
//!
//! Every point on the optical axis carries a right-propagating amplitude and a
//! left-propagating amplitude. An element maps the pair on its left side,
//! `(A, B)`, to the pair on its right side, `(C, D)`:
//!
//! ```text
//! (C, D)^T = M (A, B)^T
//! ```
//!
//! Mirrors are lossless point scatterers characterized by a real
//! polarizability `zeta`; gaps are free propagation over a length `d`.
//! Units follow `c = 1` and cavity length `L_C = 1`, so the wavenumber equals
//! the drive frequency.

use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{ensure_finite, ensure_positive, Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// 2x2 complex matrix relating the amplitude pair on the two sides of an
/// element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferMatrix {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl TransferMatrix {
    pub const IDENTITY: TransferMatrix = TransferMatrix {
        m11: ONE,
        m12: ZERO,
        m21: ZERO,
        m22: ONE,
    };

    pub fn new(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub fn determinant(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Maps `(right, left)` amplitudes on the left side of the element to the
    /// pair on its right side.
    pub fn apply(&self, right: Complex64, left: Complex64) -> (Complex64, Complex64) {
        (
            self.m11 * right + self.m12 * left,
            self.m21 * right + self.m22 * left,
        )
    }

    pub fn max_abs_diff(&self, other: &TransferMatrix) -> f64 {
        [
            self.m11 - other.m11,
            self.m12 - other.m12,
            self.m21 - other.m21,
            self.m22 - other.m22,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }

    fn mirror_unchecked(zeta: f64) -> Self {
        let iz = I * zeta;
        Self::new(ONE - iz, -iz, iz, ONE + iz)
    }

    fn propagation_unchecked(k: f64, d: f64) -> Self {
        let phase = Complex64::from_polar(1.0, k * d);
        Self::new(phase, ZERO, ZERO, phase.conj())
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, rhs: TransferMatrix) -> TransferMatrix {
        TransferMatrix {
            m11: self.m11 * rhs.m11 + self.m12 * rhs.m21,
            m12: self.m11 * rhs.m12 + self.m12 * rhs.m22,
            m21: self.m21 * rhs.m11 + self.m22 * rhs.m21,
            m22: self.m21 * rhs.m12 + self.m22 * rhs.m22,
        }
    }
}

/// Transfer matrix of a point-like mirror with polarizability `zeta`:
/// `[[1 - i zeta, -i zeta], [i zeta, 1 + i zeta]]`.
pub fn mirror_matrix(zeta: f64) -> Result<TransferMatrix> {
    ensure_finite("zeta", zeta)?;
    Ok(TransferMatrix::mirror_unchecked(zeta))
}

/// Amplitude reflectivity `r = i zeta / (1 - i zeta)`.
///
/// Driving a single mirror from the left through [`solve_boundary`] returns
/// `conj(r)` as the reflected amplitude: the matrix convention and this
/// formula differ by complex conjugation. Magnitudes agree.
pub fn reflectivity(zeta: f64) -> Result<Complex64> {
    ensure_finite("zeta", zeta)?;
    Ok(I * zeta / (ONE - I * zeta))
}

/// Amplitude transmissivity `t = 1 / (1 - i zeta)`. See [`reflectivity`] for
/// the conjugation relative to the transfer-matrix solution.
pub fn transmissivity(zeta: f64) -> Result<Complex64> {
    ensure_finite("zeta", zeta)?;
    Ok(ONE / (ONE - I * zeta))
}

/// Free propagation over a distance `d` at wavenumber `k`:
/// `diag(exp(i k d), exp(-i k d))`.
pub fn propagation_matrix(k: f64, d: f64) -> Result<TransferMatrix> {
    ensure_positive("k", k)?;
    ensure_positive("d", d)?;
    Ok(TransferMatrix::propagation_unchecked(k, d))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StackElement {
    Mirror { zeta: f64 },
    Gap { length: f64 },
}

impl StackElement {
    pub fn matrix(&self, k: f64) -> TransferMatrix {
        match *self {
            StackElement::Mirror { zeta } => TransferMatrix::mirror_unchecked(zeta),
            StackElement::Gap { length } => TransferMatrix::propagation_unchecked(k, length),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            StackElement::Mirror { zeta } => ensure_finite("zeta", zeta).map(|_| ()),
            StackElement::Gap { length } => ensure_positive("gap length", length).map(|_| ()),
        }
    }
}

/// Ordered, left-to-right sequence of mirrors and gaps. Mirrors have zero
/// thickness, so element positions are cumulative gap lengths measured from
/// the left end of the stack.
///
/// An empty stack is allowed and behaves as free space.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OpticalStack {
    elements: Vec<StackElement>,
}

impl OpticalStack {
    pub fn new(elements: Vec<StackElement>) -> Result<Self> {
        for element in &elements {
            element.validate()?;
        }
        Ok(Self { elements })
    }

    /// Two mirrors separated by `length`.
    pub fn single_cavity(zeta: f64, length: f64) -> Result<Self> {
        Self::new(vec![
            StackElement::Mirror { zeta },
            StackElement::Gap { length },
            StackElement::Mirror { zeta },
        ])
    }

    /// Three mirrors forming two cavities of lengths `l1` and `l2`.
    pub fn three_mirror(zeta: f64, l1: f64, l2: f64) -> Result<Self> {
        Self::new(vec![
            StackElement::Mirror { zeta },
            StackElement::Gap { length: l1 },
            StackElement::Mirror { zeta },
            StackElement::Gap { length: l2 },
            StackElement::Mirror { zeta },
        ])
    }

    /// Four identical mirrors: cavity, fiber, cavity.
    pub fn cascaded(zeta: f64, l_c: f64, l_f: f64) -> Result<Self> {
        Self::new(vec![
            StackElement::Mirror { zeta },
            StackElement::Gap { length: l_c },
            StackElement::Mirror { zeta },
            StackElement::Gap { length: l_f },
            StackElement::Mirror { zeta },
            StackElement::Gap { length: l_c },
            StackElement::Mirror { zeta },
        ])
    }

    pub fn elements(&self) -> &[StackElement] {
        &self.elements
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn mirror_count(&self) -> usize {
        self.elements
            .iter()
            .filter(|e| matches!(e, StackElement::Mirror { .. }))
            .count()
    }

    /// Total length of the stack (sum of gaps).
    pub fn length(&self) -> f64 {
        self.elements
            .iter()
            .map(|e| match e {
                StackElement::Gap { length } => *length,
                StackElement::Mirror { .. } => 0.0,
            })
            .sum()
    }

    /// Positions of the mirrors, left to right.
    pub fn mirror_positions(&self) -> Vec<f64> {
        let mut pos = 0.0;
        let mut out = Vec::new();
        for e in &self.elements {
            match e {
                StackElement::Gap { length } => pos += length,
                StackElement::Mirror { .. } => out.push(pos),
            }
        }
        out
    }
}

/// Incoming amplitudes on both sides of the stack at wavenumber `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryDrive {
    /// Right-propagating amplitude incident from the left.
    pub a_in: Complex64,
    /// Left-propagating amplitude incident from the right.
    pub d_in: Complex64,
    pub k: f64,
}

impl BoundaryDrive {
    pub fn new(a_in: Complex64, d_in: Complex64, k: f64) -> Result<Self> {
        ensure_positive("k", k)?;
        if !(a_in.is_finite() && d_in.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "drive amplitude",
                value: f64::NAN,
                reason: "must be finite",
            });
        }
        Ok(Self { a_in, d_in, k })
    }

    /// Unit drive from the left only.
    pub fn from_left(k: f64) -> Result<Self> {
        Self::new(ONE, ZERO, k)
    }

    /// `A = 1`, `D = exp(-i phi)`.
    pub fn two_sided(k: f64, phi: f64) -> Result<Self> {
        Self::new(ONE, Complex64::from_polar(1.0, -phi), k)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            a_in: self.a_in * factor,
            d_in: self.d_in * factor,
            k: self.k,
        }
    }
}

/// Plane-wave amplitudes of one homogeneous region between mirrors.
///
/// The field inside the region is
/// `right * exp(i k (x - reference)) + left * exp(-i k (x - reference))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionAmplitudes {
    /// Left edge (`-inf` for the outer left region).
    pub start: f64,
    /// Right edge (`+inf` for the outer right region).
    pub end: f64,
    pub reference: f64,
    pub right: Complex64,
    pub left: Complex64,
}

impl RegionAmplitudes {
    /// `|right|^2 + |left|^2`; constant across the region.
    pub fn intensity(&self) -> f64 {
        self.right.norm_sqr() + self.left.norm_sqr()
    }

    /// Amplitudes referenced at position `x`.
    pub fn at(&self, k: f64, x: f64) -> (Complex64, Complex64) {
        let phase = Complex64::from_polar(1.0, k * (x - self.reference));
        (self.right * phase, self.left * phase.conj())
    }

    fn contains(&self, x: f64) -> bool {
        x >= self.start && x < self.end
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScatteringSolution {
    pub k: f64,
    pub a_in: Complex64,
    pub d_in: Complex64,
    /// Outgoing to the left.
    pub b_out: Complex64,
    /// Outgoing to the right.
    pub c_out: Complex64,
    /// One entry per homogeneous region: the outer left region, every region
    /// between consecutive mirrors, and the outer right region.
    pub regions: Vec<RegionAmplitudes>,
}

impl ScatteringSolution {
    /// Index of the region containing `x`. A point exactly on a mirror belongs
    /// to the region on its right.
    pub fn region_index(&self, x: f64) -> usize {
        self.regions
            .iter()
            .rposition(|r| r.contains(x))
            .unwrap_or(0)
    }

    /// `|a_in|^2 + |d_in|^2 - |b_out|^2 - |c_out|^2`; zero for a lossless stack.
    pub fn flux_imbalance(&self) -> f64 {
        self.a_in.norm_sqr() + self.d_in.norm_sqr() - self.b_out.norm_sqr() - self.c_out.norm_sqr()
    }
}

/// Product of all element matrices, so that `(C, D) = M (A, B)` across the
/// whole stack. For a stack `[X, Y]` the result is `matrix(Y) * matrix(X)`.
pub fn compose(stack: &OpticalStack, k: f64) -> Result<TransferMatrix> {
    ensure_positive("k", k)?;
    Ok(stack
        .elements
        .iter()
        .fold(TransferMatrix::IDENTITY, |acc, e| e.matrix(k) * acc))
}

/// Reflection and transmission amplitudes of an element or a stack:
/// `B = r_left A + t_backward D`, `C = t_forward A + r_right D`.
///
/// Composing these (the Redheffer star product) stays bounded for lossless
/// stacks, unlike products of transfer matrices whose entries grow with the
/// finesse. Outgoing and internal amplitudes are computed this way.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatteringMatrix {
    pub r_left: Complex64,
    pub t_forward: Complex64,
    pub t_backward: Complex64,
    pub r_right: Complex64,
}

impl ScatteringMatrix {
    pub const IDENTITY: ScatteringMatrix = ScatteringMatrix {
        r_left: ZERO,
        t_forward: ONE,
        t_backward: ONE,
        r_right: ZERO,
    };

    pub fn of_element(element: &StackElement, k: f64) -> Self {
        match *element {
            StackElement::Mirror { zeta } => {
                let t = ONE / (ONE + I * zeta);
                let r = -I * zeta * t;
                Self {
                    r_left: r,
                    t_forward: t,
                    t_backward: t,
                    r_right: r,
                }
            }
            StackElement::Gap { length } => {
                let phase = Complex64::from_polar(1.0, k * length);
                Self {
                    r_left: ZERO,
                    t_forward: phase,
                    t_backward: phase,
                    r_right: ZERO,
                }
            }
        }
    }

    /// `self` followed on its right by `next`.
    pub fn then(&self, next: &ScatteringMatrix) -> Result<Self> {
        let den = ONE - self.r_right * next.r_left;
        if den.norm() < 1e-300 {
            return Err(Error::SingularBoundary { denominator: den.norm() });
        }
        Ok(Self {
            r_left: self.r_left + self.t_backward * next.r_left * self.t_forward / den,
            t_forward: next.t_forward * self.t_forward / den,
            t_backward: self.t_backward * next.t_backward / den,
            r_right: next.r_right + next.t_forward * self.r_right * next.t_backward / den,
        })
    }

    /// Equivalent transfer matrix, `(C, D) = M (A, B)`.
    pub fn to_transfer(&self) -> TransferMatrix {
        let inv = ONE / self.t_backward;
        TransferMatrix::new(
            self.t_forward - self.r_right * self.r_left * inv,
            self.r_right * inv,
            -self.r_left * inv,
            inv,
        )
    }
}

/// Scattering matrix of the whole stack at wavenumber `k`.
pub fn stack_scattering(stack: &OpticalStack, k: f64) -> Result<ScatteringMatrix> {
    ensure_positive("k", k)?;
    stack
        .elements
        .iter()
        .try_fold(ScatteringMatrix::IDENTITY, |acc, e| acc.then(&ScatteringMatrix::of_element(e, k)))
}

/// Solves for the outgoing amplitudes and the amplitudes in every region.
pub fn solve_boundary(stack: &OpticalStack, drive: &BoundaryDrive) -> Result<ScatteringSolution> {
    let k = drive.k;
    ensure_positive("k", k)?;
    let (a, d) = (drive.a_in, drive.d_in);
    let elements = &stack.elements;
    let n = elements.len();

    // prefix[j] covers elements[..j], suffix[j] covers elements[j..].
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(ScatteringMatrix::IDENTITY);
    for e in elements {
        let next = prefix[prefix.len() - 1].then(&ScatteringMatrix::of_element(e, k))?;
        prefix.push(next);
    }
    let mut suffix = vec![ScatteringMatrix::IDENTITY; n + 1];
    for j in (0..n).rev() {
        suffix[j] = ScatteringMatrix::of_element(&elements[j], k).then(&suffix[j + 1])?;
    }

    let total = prefix[n];
    let b = total.r_left * a + total.t_backward * d;
    let c = total.t_forward * a + total.r_right * d;

    let mut regions = Vec::with_capacity(stack.mirror_count() + 1);
    let mut start = f64::NEG_INFINITY;
    let mut reference = 0.0;
    let (mut right, mut left) = (a, b);
    let mut pos = 0.0;
    for (j, element) in elements.iter().enumerate() {
        match *element {
            StackElement::Gap { length } => pos += length,
            StackElement::Mirror { .. } => {
                regions.push(RegionAmplitudes {
                    start,
                    end: pos,
                    reference,
                    right,
                    left,
                });
                let (p, q) = (&prefix[j + 1], &suffix[j + 1]);
                let den = ONE - p.r_right * q.r_left;
                if den.norm() < 1e-300 {
                    return Err(Error::SingularBoundary { denominator: den.norm() });
                }
                right = (p.t_forward * a + p.r_right * q.t_backward * d) / den;
                left = q.r_left * right + q.t_backward * d;
                start = pos;
                reference = pos;
            }
        }
    }
    regions.push(RegionAmplitudes {
        start,
        end: f64::INFINITY,
        reference,
        right,
        left,
    });

    Ok(ScatteringSolution {
        k,
        a_in: a,
        d_in: d,
        b_out: b,
        c_out: c,
        regions,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSample {
    pub position: f64,
    pub right: Complex64,
    pub left: Complex64,
    /// `|right|^2 + |left|^2`, without the standing-wave cross term.
    pub intensity: f64,
}

/// Amplitudes and intensity at each requested position. Positions outside
/// the stack use the outer-region amplitudes.
pub fn field_profile(
    stack: &OpticalStack,
    drive: &BoundaryDrive,
    positions: &[f64],
) -> Result<Vec<FieldSample>> {
    let solution = solve_boundary(stack, drive)?;
    positions
        .iter()
        .map(|&x| {
            ensure_finite("position", x)?;
            let region = &solution.regions[solution.region_index(x)];
            let (right, left) = region.at(solution.k, x);
            Ok(FieldSample {
                position: x,
                right,
                left,
                intensity: right.norm_sqr() + left.norm_sqr(),
            })
        })
        .collect()
}
