//! The distinguished polynomials: `kappa(u, v)`, the products `w_m` and the
//! words `phi'_m`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::polynomial::Polynomial;
use crate::word::{Mode, Word};

/// `kappa(u, v) = [u, v] u^(p-1) v^(p-1)`, fully expanded.
pub fn kappa(u: &Polynomial, v: &Polynomial) -> Result<Polynomial> {
    let e = u.field().p() - 1;
    u.commutator(v)?.try_mul(&u.pow(e)?)?.try_mul(&v.pow(e)?)
}

/// `w_m(u_1, ..., u_2m) = prod_r kappa(u_{2r-1}, u_{2r})`.
///
/// An empty argument list gives `w_0 = 1`, which exists only in unital mode.
pub fn w_of(field: Field, mode: Mode, args: &[Polynomial]) -> Result<Polynomial> {
    if !args.len().is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "w_m takes an even number of arguments, got {}",
            args.len()
        )));
    }
    if args.is_empty() {
        return match mode {
            Mode::Unital => Ok(Polynomial::one(field)),
            Mode::Nonunital => Err(Error::ConstantInNonunital),
        };
    }
    let mut acc: Option<Polynomial> = None;
    for pair in args.chunks(2) {
        let k = kappa(&pair[0], &pair[1])?;
        acc = Some(match acc {
            None => k,
            Some(a) => a.try_mul(&k)?,
        });
    }
    Ok(acc.expect("nonempty"))
}

/// `w_m` on the given variables (default `x1..x_2m`).
pub fn build_w(field: Field, mode: Mode, m: u32, variables: Option<&[u32]>) -> Result<Polynomial> {
    let default: Vec<u32> = (1..=2 * m).collect();
    let vars = variables.unwrap_or(&default);
    if vars.len() != 2 * m as usize {
        return Err(Error::InvalidParameter(format!(
            "w_{m} needs {} variables, got {}",
            2 * m,
            vars.len()
        )));
    }
    let mut sorted = vars.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != vars.len() {
        return Err(Error::InvalidParameter(
            "w_m variables must be distinct".into(),
        ));
    }
    let args: Vec<Polynomial> = vars
        .iter()
        .map(|&v| Polynomial::var(field, mode, v))
        .collect();
    w_of(field, mode, &args)
}

/// The single word `prod_i x_{2i-1}^(p-1) x_{2i} x_{2i-1} x_{2i}^(p-1)`.
pub fn build_phi_prime(field: Field, mode: Mode, m: u32) -> Result<Polynomial> {
    if m == 0 {
        return Err(Error::InvalidParameter("phi'_m needs m >= 1".into()));
    }
    let e = field.p() as usize - 1;
    let mut letters = Vec::with_capacity(2 * m as usize * field.p() as usize);
    for i in 1..=m {
        let (a, b) = (2 * i - 1, 2 * i);
        letters.extend(std::iter::repeat_n(a, e));
        letters.push(b);
        letters.push(a);
        letters.extend(std::iter::repeat_n(b, e));
    }
    Polynomial::monomial(field, mode, Word::new(letters), 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Field {
        Field::new(p).unwrap()
    }

    #[test]
    fn kappa_shape() {
        for p in [3, 5] {
            let x1 = Polynomial::var(f(p), Mode::Nonunital, 1);
            let x2 = Polynomial::var(f(p), Mode::Nonunital, 2);
            let k = kappa(&x1, &x2).unwrap();
            assert_eq!(k.len(), 2);
            for (w, _) in k.terms() {
                let d = w.multidegree();
                assert_eq!((d.get(1), d.get(2)), (p, p));
            }
            assert!(kappa(&x1, &x1).unwrap().is_zero());
        }
    }

    #[test]
    fn kappa_scaling_p3() {
        let x1 = Polynomial::var(f(3), Mode::Nonunital, 1);
        let x2 = Polynomial::var(f(3), Mode::Nonunital, 2);
        let lhs = kappa(&x1, &x2.scale(2)).unwrap();
        assert_eq!(lhs, kappa(&x1, &x2).unwrap().scale(2));
    }

    #[test]
    fn w_builders() {
        let f3 = f(3);
        assert_eq!(build_w(f3, Mode::Unital, 0, None).unwrap(), Polynomial::one(f3));
        assert_eq!(build_w(f3, Mode::Nonunital, 0, None), Err(Error::ConstantInNonunital));
        let x = |i| Polynomial::var(f3, Mode::Nonunital, i);
        assert_eq!(build_w(f3, Mode::Nonunital, 1, None).unwrap(), kappa(&x(1), &x(2)).unwrap());
        let w2 = build_w(f3, Mode::Nonunital, 2, None).unwrap();
        assert_eq!(w2.degree(), Some(12));
        assert!(build_w(f3, Mode::Nonunital, 1, Some(&[3, 3])).is_err());
    }

    #[test]
    fn phi_prime_words() {
        let f3 = f(3);
        let p1 = build_phi_prime(f3, Mode::Unital, 1).unwrap();
        assert_eq!(p1.terms().next().unwrap().0.letters(), &[1, 1, 2, 1, 2, 2]);
        let p2 = build_phi_prime(f3, Mode::Unital, 2).unwrap();
        assert_eq!(
            p2.terms().next().unwrap().0.letters(),
            &[1, 1, 2, 1, 2, 2, 3, 3, 4, 3, 4, 4]
        );
        let d = p2.terms().next().unwrap().0.multidegree();
        assert!((1..=4).all(|v| d.get(v) == 3));
    }
}
