//! Cut-and-paste of two Fredholm modules over a common ideal: the pasted
//! module `x ◇ x̃`, the rotation homotopy joining `x ⊕ x̃` to
//! `(x ◇ x̃) ⊕ (x̃ ◇ x)`, and the signed swap that identifies its endpoint.
//!
//! All operators are written in the ordered decomposition
//! `H_1 ⊕ H_0 ⊕ H_2`; the corner blocks `P_1FP_2`, `P_2FP_1` are dropped (their
//! profiles stay available on the decompositions).

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::algebra::{ideal_cover_check, ideal_intersect, AlgebraRep, Ideal};
use crate::error::{Error, Result};
use crate::fredholm::{
    block_decompose, canonical_identification, check_intertwiner, defect_report, identification_matrix, BlockDecomposition,
    DefectReport, FredholmModule, TestElement, EXACT_TOL,
};
use crate::linalg::{self, CMat};

/// Which middle block the pasted operator uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CChoice {
    #[default]
    FromX,
    FromXtilde,
    Average,
}

/// Two modules over the same algebra, both rewritten in the order
/// `H_1, H_0, H_2`, with an identification `T: H_0 → H̃_0`.
#[derive(Clone, Debug)]
pub struct SurgeryPair {
    x: FredholmModule,
    y: FredholmModule,
    j1: Ideal,
    j2: Ideal,
    dx: BlockDecomposition,
    dy: BlockDecomposition,
    t: CMat,
}

impl SurgeryPair {
    /// Uses the canonical identification of `JH` with `JH̃` when `t` is `None`.
    pub fn new(x: &FredholmModule, y: &FredholmModule, j1: &Ideal, j2: &Ideal, t: Option<CMat>) -> Result<Self> {
        if x.algebra() != y.algebra() {
            return Err(Error::AlgebraMismatch("surgery of modules over different algebras".into()));
        }
        if x.is_graded() != y.is_graded() {
            return Err(Error::Grading("surgery of a graded with an ungraded module".into()));
        }
        if !ideal_cover_check(j1, j2, x.algebra())? {
            let uncovered = (0..x.algebra().num_blocks())
                .filter(|&i| !j1.contains(i) && !j2.contains(i))
                .collect();
            return Err(Error::NoDecomposition { uncovered });
        }
        for (name, m) in [("x", x), ("x~", y)] {
            if !m.rep().is_nondegenerate() {
                return Err(Error::Degenerate(format!("representation of {name}")));
            }
        }
        let x = x.permute(&block_decompose(x, j1, j2)?.ordering())?;
        let y = y.permute(&block_decompose(y, j1, j2)?.ordering())?;
        let dx = block_decompose(&x, j1, j2)?;
        let dy = block_decompose(&y, j1, j2)?;
        let j = ideal_intersect(j1, j2);
        let t = match t {
            Some(t) => t,
            None => identification_matrix(&canonical_identification(x.rep(), y.rep(), &j)?),
        };
        if t.nrows() != dy.h0().len() || t.ncols() != dx.h0().len() {
            return Err(Error::Identification(format!(
                "H0 has dimension {} but the identification is {}x{} (target {})",
                dx.h0().len(),
                t.nrows(),
                t.ncols(),
                dy.h0().len()
            )));
        }
        let defect = check_intertwiner(&t, x.rep(), y.rep(), &j)?;
        if defect > EXACT_TOL {
            return Err(Error::InvalidIntertwiner {
                defect,
                tol: EXACT_TOL,
            });
        }
        Ok(Self {
            x,
            y,
            j1: j1.clone(),
            j2: j2.clone(),
            dx,
            dy,
            t,
        })
    }

    /// The pair `(x̃, x)` with the inverse identification.
    pub fn swapped(&self) -> Self {
        Self {
            x: self.y.clone(),
            y: self.x.clone(),
            j1: self.j1.clone(),
            j2: self.j2.clone(),
            dx: self.dy.clone(),
            dy: self.dx.clone(),
            t: linalg::adjoint(&self.t),
        }
    }

    /// `x` in block order.
    pub fn x(&self) -> &FredholmModule {
        &self.x
    }

    /// `x̃` in block order.
    pub fn x_tilde(&self) -> &FredholmModule {
        &self.y
    }

    pub fn decomposition_x(&self) -> &BlockDecomposition {
        &self.dx
    }

    pub fn decomposition_x_tilde(&self) -> &BlockDecomposition {
        &self.dy
    }

    pub fn identification(&self) -> &CMat {
        &self.t
    }

    pub fn ideals(&self) -> (&Ideal, &Ideal) {
        (&self.j1, &self.j2)
    }

    /// `c̃` pulled back to `H_0`: `T* c̃ T`.
    fn c_tilde_on_h0(&self) -> CMat {
        self.t.adjoint() * &self.dy.c * &self.t
    }

    /// `d̃` pulled back to `H_0`: `T* d̃`.
    fn d_tilde_on_h0(&self) -> CMat {
        self.t.adjoint() * &self.dy.d
    }

    /// `F` with both corner blocks removed (block order).
    pub fn cornerless_x(&self) -> CMat {
        cornerless(&self.dx)
    }

    /// `F̃` with both corner blocks removed (block order).
    pub fn cornerless_x_tilde(&self) -> CMat {
        cornerless(&self.dy)
    }
}

fn cornerless(d: &BlockDecomposition) -> CMat {
    let [n1, n0, n2] = d.dims();
    linalg::assemble(
        &[n1, n0, n2],
        &[n1, n0, n2],
        &[
            vec![Some(d.a.clone()), Some(d.b.clone()), None],
            vec![Some(linalg::adjoint(&d.b)), Some(d.c.clone()), Some(d.d.clone())],
            vec![None, Some(linalg::adjoint(&d.d)), Some(d.e.clone())],
        ],
    )
}

/// `x ◇ x̃` on `H_1 ⊕ H_0 ⊕ H̃_2`. The mirror `x̃ ◇ x` is
/// `diamond(&p.swapped(), ..)`.
pub fn diamond(p: &SurgeryPair, c_choice: CChoice) -> Result<FredholmModule> {
    let [n1, n0, _] = p.dx.dims();
    let [_, _, m2] = p.dy.dims();
    let c = match c_choice {
        CChoice::FromX => p.dx.c.clone(),
        CChoice::FromXtilde => p.c_tilde_on_h0(),
        CChoice::Average => linalg::scale(&(&p.dx.c + p.c_tilde_on_h0()), 0.5),
    };
    let dt = p.d_tilde_on_h0();
    let f = linalg::assemble(
        &[n1, n0, m2],
        &[n1, n0, m2],
        &[
            vec![Some(p.dx.a.clone()), Some(p.dx.b.clone()), None],
            vec![Some(linalg::adjoint(&p.dx.b)), Some(c), Some(dt.clone())],
            vec![None, Some(linalg::adjoint(&dt)), Some(p.dy.e.clone())],
        ],
    );
    let left: Vec<usize> = (0..n1 + n0).collect();
    let right: Vec<usize> = p.dy.h2().to_vec();
    let rep = p.x.rep().restrict(&left)?.direct_sum(&p.y.rep().restrict(&right)?)?;
    FredholmModule::new(rep, f)
}

/// One point of the rotation homotopy.
#[derive(Clone, Debug)]
pub struct HomotopySample {
    pub t: f64,
    /// Operator on `H_1 ⊕ H_0 ⊕ H_2 ⊕ H̃_1 ⊕ H̃_0 ⊕ H̃_2`.
    pub module: FredholmModule,
}

impl HomotopySample {
    pub fn operator(&self) -> &CMat {
        self.module.operator()
    }

    pub fn defect_report(&self, tests: &[TestElement]) -> Result<DefectReport> {
        defect_report(&self.module, tests)
    }
}

/// `(sin t, cos t)`, exact at both ends of `[0, π/2]`.
pub fn sin_cos(t: f64) -> (f64, f64) {
    if t == 0.0 {
        (0.0, 1.0)
    } else if t == FRAC_PI_2 {
        (1.0, 0.0)
    } else {
        t.sin_cos()
    }
}

/// Uniform grid of `n` points on `[0, π/2]` (endpoints included exactly).
pub fn t_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|i| if i + 1 == n { FRAC_PI_2 } else { FRAC_PI_2 * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

/// The rotation family joining `F ⊕ F̃` (at `t = 0`) to the pasted pair (at
/// `t = π/2`):
///
/// ```text
/// ⎡ a    b        0       0    0       0      ⎤
/// ⎢ b*   c        d·k     0    0      −d̃·s    ⎥
/// ⎢ 0    d*·k     e       0    d*·s    0      ⎥
/// ⎢ 0    0        0       ã    b̃       0      ⎥
/// ⎢ 0    0        d·s     b̃*   c̃       d̃·k    ⎥
/// ⎣ 0   −d̃*·s     0       0    d̃*·k    ẽ      ⎦
/// ```
///
/// with `s = sin t`, `k = cos t`; the two copies of `H_0` are linked by `T`.
pub fn homotopy_operator(p: &SurgeryPair, t: f64) -> Result<HomotopySample> {
    if !(0.0..=FRAC_PI_2).contains(&t) || t.is_nan() {
        return Err(Error::TOutOfRange(t));
    }
    let (s, k) = sin_cos(t);
    let (dx, dy) = (&p.dx, &p.dy);
    let [n1, n0, n2] = dx.dims();
    let [m1, m0, m2] = dy.dims();
    let dims = [n1, n0, n2, m1, m0, m2];
    // Cross terms expressed through T.
    let td = &p.t * &dx.d; // H_2 → H̃_0
    let dt = p.d_tilde_on_h0(); // H̃_2 → H_0
    let sc = |m: &CMat, f: f64| Some(linalg::scale(m, f));
    let adj = linalg::adjoint;
    let blocks = vec![
        vec![Some(dx.a.clone()), Some(dx.b.clone()), None, None, None, None],
        vec![Some(adj(&dx.b)), Some(dx.c.clone()), sc(&dx.d, k), None, None, sc(&dt, -s)],
        vec![None, sc(&adj(&dx.d), k), Some(dx.e.clone()), None, sc(&adj(&td), s), None],
        vec![None, None, None, Some(dy.a.clone()), Some(dy.b.clone()), None],
        vec![None, None, sc(&td, s), Some(adj(&dy.b)), Some(dy.c.clone()), sc(&dy.d, k)],
        vec![None, sc(&adj(&dt), -s), None, None, sc(&adj(&dy.d), k), Some(dy.e.clone())],
    ];
    let f = linalg::assemble(&dims, &dims, &blocks);
    let rep = p.x.rep().direct_sum(p.y.rep())?;
    Ok(HomotopySample {
        t,
        module: FredholmModule::new(rep, f)?,
    })
}

/// Sign convention of the pasting unitary.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SwapSign {
    /// Swap the third and sixth summands, then negate the new third one
    /// (the one carrying `H̃_2`). This is the convention under which the
    /// endpoint identity holds.
    #[default]
    NegateThird,
    /// Swap, then negate the new sixth summand (carrying `H_2`).
    NegateSixth,
}

/// `U: H_1 ⊕ H_0 ⊕ H_2 ⊕ H̃_1 ⊕ H̃_0 ⊕ H̃_2 → (H_1 ⊕ H_0 ⊕ H̃_2) ⊕ (H̃_1 ⊕ H̃_0 ⊕ H_2)`.
pub fn pasting_unitary(p: &SurgeryPair) -> CMat {
    pasting_unitary_with(p, SwapSign::NegateThird)
}

pub fn pasting_unitary_with(p: &SurgeryPair, sign: SwapSign) -> CMat {
    let (perm, signs) = pasting_route(p, sign);
    let n = perm.len();
    let mut u = linalg::zeros(n, n);
    for (col, (&row, &s)) in perm.iter().zip(&signs).enumerate() {
        u[(row, col)] = faer::c64::new(s, 0.0);
    }
    u
}

/// Column `j` of `U` is `signs[j] · e_{perm[j]}`.
fn pasting_route(p: &SurgeryPair, sign: SwapSign) -> (Vec<usize>, Vec<f64>) {
    let [n1, n0, n2] = p.dx.dims();
    let [m1, m0, m2] = p.dy.dims();
    let src = [n1, n0, n2, m1, m0, m2];
    let dst = [n1, n0, m2, m1, m0, n2];
    // Signs carried by the third and sixth target summands.
    let (t3, t6) = match sign {
        SwapSign::NegateThird => (-1.0, 1.0),
        SwapSign::NegateSixth => (1.0, -1.0),
    };
    // source summand -> (target summand, sign)
    let route = [(0, 1.0), (1, 1.0), (5, t6), (3, 1.0), (4, 1.0), (2, t3)];
    let offsets = |dims: &[usize; 6]| {
        let mut o = [0usize; 6];
        for i in 1..6 {
            o[i] = o[i - 1] + dims[i - 1];
        }
        o
    };
    let (so, do_) = (offsets(&src), offsets(&dst));
    let n: usize = src.iter().sum();
    let mut perm = vec![0; n];
    let mut signs = vec![0.0; n];
    for (i, &(target, s)) in route.iter().enumerate() {
        debug_assert_eq!(src[i], dst[target]);
        for r in 0..src[i] {
            perm[so[i] + r] = do_[target] + r;
            signs[so[i] + r] = s;
        }
    }
    (perm, signs)
}

/// `(x ◇ x̃) ⊕ (x̃ ◇ x)` with the middle blocks taken from `x` and `x̃`
/// respectively.
pub fn pasted_pair(p: &SurgeryPair) -> Result<FredholmModule> {
    let fwd = diamond(p, CChoice::FromX)?;
    let back = diamond(&p.swapped(), CChoice::FromX)?;
    crate::fredholm::direct_sum(&fwd, &back)
}

/// `‖𝓕_{π/2} − U*((F◇F̃) ⊕ (F̃◇F))U‖`.
pub fn endpoint_check(p: &SurgeryPair) -> Result<f64> {
    endpoint_check_with(p, SwapSign::NegateThird)
}

pub fn endpoint_check_with(p: &SurgeryPair, sign: SwapSign) -> Result<f64> {
    let end = homotopy_operator(p, FRAC_PI_2)?;
    let g = pasted_pair(p)?;
    let (perm, signs) = pasting_route(p, sign);
    let gm = g.operator();
    // `(U* G U)_{ij} = s_i s_j G_{perm(i), perm(j)}`.
    let conj = CMat::from_fn(perm.len(), perm.len(), |i, j| gm[(perm[i], perm[j])] * (signs[i] * signs[j]));
    linalg::op_norm(&(end.operator() - conj))
}

/// `max_{ρ}` of `‖Uρ(φ) − ρ'(φ)U‖` over the given elements, where `ρ` acts on
/// `H ⊕ H̃` and `ρ'` on the pasted pair.
pub fn pasting_intertwining_defect(p: &SurgeryPair, tests: &[TestElement]) -> Result<f64> {
    let u = pasting_unitary(p);
    let src: AlgebraRep = p.x.rep().direct_sum(p.y.rep())?;
    let g = pasted_pair(p)?;
    let mut worst = 0.0f64;
    for t in tests {
        let a = &u * src.rep_apply(&t.element)?;
        let b = g.rep().rep_apply(&t.element)? * &u;
        worst = worst.max(linalg::max_abs(&(a - b)));
    }
    Ok(worst)
}
