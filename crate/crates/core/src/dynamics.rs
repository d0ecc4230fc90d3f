//! Equations of motion on the operator side and truncated Taylor series of the
//! time evolution generated by the Poisson-Moyal bracket.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ordering::OrderParam;
use crate::phase::{inv_i_hbar, PhasePoly, Var};
use crate::scalar::{GaussianRational, Scalar};
use crate::superop::{pmb, Liouvillian, PmbForm};
use crate::weyl::{Generator, OpPoly};
use crate::wwgm::ms;

/// Taylor coefficients `c_0, ..., c_N` of `X(t) = sum c_k t^k`; `c_k`
/// already includes the `1/k!`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowSeries<T> {
    coefficients: Vec<T>,
}

impl<T> FlowSeries<T> {
    pub fn new(coefficients: Vec<T>) -> Self {
        assert!(!coefficients.is_empty(), "a flow series has at least the initial value");
        Self { coefficients }
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn initial(&self) -> &T {
        &self.coefficients[0]
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> FlowSeries<U> {
        FlowSeries { coefficients: self.coefficients.iter().map(f).collect() }
    }
}

fn one_over(k: usize) -> Scalar {
    Scalar::constant(GaussianRational::from_rational(BigRational::new(1.into(), BigInt::from(k))))
}

fn iterate<T: Clone>(
    x0: T,
    order: usize,
    mut step: impl FnMut(&T) -> Result<T>,
    scale: impl Fn(&T, &Scalar) -> T,
) -> Result<FlowSeries<T>> {
    let mut coefficients = Vec::with_capacity(order + 1);
    coefficients.push(x0);
    for k in 1..=order {
        let next = step(&coefficients[k - 1])?;
        coefficients.push(scale(&next, &one_over(k)));
    }
    Ok(FlowSeries { coefficients })
}

/// Per dof, `(dq/dt, dp/dt) = ((i hbar)^{-1} [q, H], (i hbar)^{-1} [p, H])`
/// with `H = M_s(hamiltonian)`.
pub fn hamilton_rhs(hamiltonian: &PhasePoly, order: &OrderParam) -> Result<Vec<(OpPoly, OpPoly)>> {
    let h = ms(hamiltonian, order);
    let dof = h.dof();
    (0..dof)
        .map(|i| {
            let qd = OpPoly::generator(dof, Generator::q(i))?
                .commutator(&h)?
                .scale(&inv_i_hbar())
                .assert_no_negative_hbar()?;
            let pd = OpPoly::generator(dof, Generator::p(i))?
                .commutator(&h)?
                .scale(&inv_i_hbar())
                .assert_no_negative_hbar()?;
            Ok((qd, pd))
        })
        .collect()
}

/// Series solution of `dF/dt = [H, F]_PMB`: `c_k = (ad_H)^k F_0 / k!`.
pub fn pmb_flow_series(
    f0: &OpPoly,
    hamiltonian: &PhasePoly,
    order: &OrderParam,
    n: usize,
) -> Result<FlowSeries<OpPoly>> {
    let h = ms(hamiltonian, order);
    iterate(f0.clone(), n, |x| pmb(&h, x, order, PmbForm::GOnF), |x, c| x.scale(c))
}

/// Series solution of `df/dt = {H, f}_PB`.
pub fn classical_flow_series(f0: &PhasePoly, hamiltonian: &PhasePoly, n: usize) -> Result<FlowSeries<PhasePoly>> {
    iterate(f0.clone(), n, |x| hamiltonian.poisson_bracket(x), |x, c| x.scale(c))
}

/// Series of `dF/dt = (i hbar)^{-1} [F, H]`, the Heisenberg-type evolution.
pub fn commutator_flow_series(
    f0: &OpPoly,
    hamiltonian: &PhasePoly,
    order: &OrderParam,
    n: usize,
) -> Result<FlowSeries<OpPoly>> {
    let h = ms(hamiltonian, order);
    iterate(f0.clone(), n, |x| x.commutator(&h)?.scale(&inv_i_hbar()).assert_no_negative_hbar(), |x, c| x.scale(c))
}

/// `H = sum_i p_i^2 / (2 mass) + V(q)`.
pub fn kinetic_plus_potential(mass: &BigRational, potential: &PhasePoly) -> Result<PhasePoly> {
    if mass.is_zero() {
        return Err(Error::Precondition("mass must be nonzero".into()));
    }
    if !potential.is_free_of(Var::P) {
        return Err(Error::Precondition("potential must depend on q only".into()));
    }
    let dof = potential.dof();
    let half_inv_mass =
        Scalar::constant(GaussianRational::from_rational((mass * BigRational::from_integer(2.into())).recip()));
    let mut h = potential.clone();
    for i in 0..dof {
        let p = PhasePoly::var(dof, Var::P, i)?;
        h = &h + &(&p * &p).scale(&half_inv_mass);
    }
    Ok(h)
}

/// For `H = p^2/2m + V(q)`, `f = f(q)` and `g = g(p)`:
/// `dF/dt = (1/m) sum_i f_{q_i}(p_i)` and `dG/dt = -(i/hbar) sum_i g_{p_i}([p_i, V])`,
/// where `h_x` is the Liouvillian of `d_x h`.
pub fn observable_rhs(
    f: &PhasePoly,
    g: &PhasePoly,
    mass: &BigRational,
    potential: &PhasePoly,
    order: &OrderParam,
) -> Result<(OpPoly, OpPoly)> {
    if !f.is_free_of(Var::P) {
        return Err(Error::Precondition("f must depend on q only".into()));
    }
    if !g.is_free_of(Var::Q) {
        return Err(Error::Precondition("g must depend on p only".into()));
    }
    if mass.is_zero() {
        return Err(Error::Precondition("mass must be nonzero".into()));
    }
    if !potential.is_free_of(Var::P) {
        return Err(Error::Precondition("potential must depend on q only".into()));
    }
    let dof = f.dof();
    if g.dof() != dof || potential.dof() != dof {
        return Err(Error::DofMismatch { left: dof, right: if g.dof() != dof { g.dof() } else { potential.dof() } });
    }
    let v = ms(potential, order);
    let inv_mass = Scalar::constant(GaussianRational::from_rational(mass.recip()));
    let mut f_dot = OpPoly::zero(dof);
    let mut g_dot = OpPoly::zero(dof);
    for i in 0..dof {
        let p = OpPoly::generator(dof, Generator::p(i))?;
        let fq = Liouvillian::new(f.derivative(Var::Q, i)?, order.clone());
        f_dot = &f_dot + &fq.apply(&p)?;
        let gp = Liouvillian::new(g.derivative(Var::P, i)?, order.clone());
        g_dot = &g_dot + &gp.apply(&p.commutator(&v)?)?;
    }
    let f_dot = f_dot.scale(&inv_mass);
    let g_dot = g_dot.scale(&inv_i_hbar()).assert_no_negative_hbar()?;
    Ok((f_dot, g_dot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{t_monomial, TForm};

    fn ih(c: i64) -> Scalar {
        Scalar::monomial(GaussianRational::new(BigRational::zero(), BigRational::from_integer(c.into())), 1, 0)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn oscillator() -> PhasePoly {
        (&PhasePoly::qp(2, 0) + &PhasePoly::qp(0, 2)).scale(&Scalar::ratio(1, 2))
    }

    #[test]
    fn free_particle_rhs() {
        let h = PhasePoly::qp(0, 2).scale(&Scalar::ratio(1, 2));
        let rhs = hamilton_rhs(&h, &OrderParam::formal()).unwrap();
        assert_eq!(rhs[0].0, OpPoly::qp(0, 1));
        assert!(rhs[0].1.is_zero());
    }

    #[test]
    fn ehrenfest_rhs() {
        // V = q^3 - 2q, m = 3
        let v = &PhasePoly::qp(3, 0) - &PhasePoly::qp(1, 0).scale(&Scalar::integer(2));
        let h = kinetic_plus_potential(&rat(3, 1), &v).unwrap();
        let rhs = hamilton_rhs(&h, &OrderParam::formal()).unwrap();
        assert_eq!(rhs[0].0, OpPoly::qp(0, 1).scale(&Scalar::ratio(1, 3)));
        let v_prime = &OpPoly::qp(2, 0).scale(&Scalar::integer(3)) - &OpPoly::identity(1).scale(&Scalar::integer(2));
        assert_eq!(rhs[0].1, -&v_prime);
    }

    #[test]
    fn dilation_hamiltonian_rhs() {
        let rhs = hamilton_rhs(&PhasePoly::qp(1, 1), &OrderParam::formal()).unwrap();
        assert_eq!(rhs[0].0, OpPoly::qp(1, 0));
        assert_eq!(rhs[0].1, -&OpPoly::qp(0, 1));
    }

    #[test]
    fn oscillator_flows() {
        let s = OrderParam::formal();
        let classical = classical_flow_series(&PhasePoly::qp(1, 0), &oscillator(), 3).unwrap();
        let expect = [
            PhasePoly::qp(1, 0),
            PhasePoly::qp(0, 1),
            PhasePoly::qp(1, 0).scale(&Scalar::ratio(-1, 2)),
            PhasePoly::qp(0, 1).scale(&Scalar::ratio(-1, 6)),
        ];
        assert_eq!(classical.coefficients(), &expect[..]);

        let quantum = pmb_flow_series(&OpPoly::qp(1, 0), &oscillator(), &s, 3).unwrap();
        let expect_ops: Vec<OpPoly> = expect.iter().map(|c| ms(c, &s)).collect();
        assert_eq!(quantum.coefficients(), &expect_ops[..]);
    }

    #[test]
    fn trivial_flows() {
        let s = OrderParam::formal();
        let f0 = OpPoly::qp(2, 1);
        let series = pmb_flow_series(&f0, &oscillator(), &s, 0).unwrap();
        assert_eq!(series.coefficients(), std::slice::from_ref(&f0));
        let constant = PhasePoly::constant(1, Scalar::integer(7));
        let series = pmb_flow_series(&f0, &constant, &s, 3).unwrap();
        assert!(series.coefficients()[1..].iter().all(OpPoly::is_zero));

        let energy = classical_flow_series(&oscillator(), &oscillator(), 3).unwrap();
        assert!(energy.coefficients()[1..].iter().all(PhasePoly::is_zero));

        let free = PhasePoly::qp(0, 2).scale(&Scalar::ratio(1, 2));
        let series = classical_flow_series(&PhasePoly::qp(1, 0), &free, 2).unwrap();
        assert_eq!(series.coefficients(), &[PhasePoly::qp(1, 0), PhasePoly::qp(0, 1), PhasePoly::zero(1)]);
    }

    #[test]
    fn observable_rhs_examples() {
        let s = OrderParam::formal();
        let v = PhasePoly::qp(2, 0).scale(&Scalar::ratio(1, 2));
        let (f_dot, _) = observable_rhs(&PhasePoly::qp(2, 0), &PhasePoly::qp(0, 1), &rat(1, 1), &v, &s).unwrap();
        let expect = &OpPoly::qp(1, 1).scale(&Scalar::integer(2)) - &OpPoly::constant(1, &ih(1) * &s.one_minus());
        assert_eq!(f_dot, expect);

        let (_, g_dot) =
            observable_rhs(&PhasePoly::qp(1, 0), &PhasePoly::qp(0, 2), &rat(1, 1), &PhasePoly::qp(1, 0), &s).unwrap();
        assert_eq!(g_dot, OpPoly::qp(0, 1).scale(&Scalar::integer(-2)));

        // f = q, g = p reproduce the operator Hamilton equations.
        let (f_dot, g_dot) = observable_rhs(&PhasePoly::qp(1, 0), &PhasePoly::qp(0, 1), &rat(2, 1), &v, &s).unwrap();
        let h = kinetic_plus_potential(&rat(2, 1), &v).unwrap();
        let rhs = hamilton_rhs(&h, &s).unwrap();
        assert_eq!((f_dot, g_dot), rhs[0].clone());

        let err = observable_rhs(&PhasePoly::qp(1, 1), &PhasePoly::qp(0, 1), &rat(1, 1), &v, &s).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let _ = t_monomial(1, 1, &s, TForm::QForm);
    }
}
