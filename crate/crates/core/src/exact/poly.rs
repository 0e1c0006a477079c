use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::linalg::{self, Span};
use super::matrix::{RatMatrix, SquareMatrix};
use super::{ExactError, Scalar};

/// Dense univariate polynomial, coefficients stored from the constant term
/// upward. Trailing zeros are never stored, so the zero polynomial has no
/// coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type IntPoly = Poly<BigInt>;
pub type RatPoly = Poly<BigRational>;

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_int(&BigInt::from(c))).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `x^degree`.
    pub fn monomial(degree: usize) -> Self {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[degree] = T::one();
        Self { coeffs }
    }

    /// `x - root`.
    pub fn linear(root: T) -> Self {
        Self::new(vec![root.neg_ref(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add_ref(&other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).sub_ref(&other.coeff(i))).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul_ref(factor)).collect())
    }

    pub fn pow(&self, exponent: u32) -> Self {
        (0..exponent).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul_ref(&T::from_int(&BigInt::from(i))))
                .collect(),
        )
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc.mul_ref(x).add_ref(c))
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &SquareMatrix<T>) -> SquareMatrix<T> {
        let id = SquareMatrix::identity(m.dim());
        self.coeffs.iter().rev().fold(SquareMatrix::zero(m.dim()), |acc, c| {
            &(&acc * m) + &id.scale(c)
        })
    }

    /// Division by a monic polynomial; exact over any ring.
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].sub_ref(&c.mul_ref(d));
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Coefficients in reverse order: `x^deg · p(1/x)` when `p(0) != 0`.
    pub fn reversed(&self) -> Self {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }
}

impl RatPoly {
    pub fn from_int_poly(p: &IntPoly) -> Self {
        Self::new(
            p.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let lead = divisor
            .leading()
            .expect("division by the zero polynomial")
            .clone();
        let monic = divisor.scale(&(BigRational::one() / &lead));
        let (q, r) = self.div_rem_monic(&monic);
        (q.scale(&(BigRational::one() / lead)), r)
    }

    pub fn make_monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&(BigRational::one() / l)),
            None => Self::zero(),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Positive rational multiple with coprime integer coefficients.
    pub fn primitive_positive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(&(c * &lcm).to_integer());
        }
        let factor = BigRational::new(lcm, g);
        self.scale(&factor)
    }

    /// Integer polynomial with coprime coefficients and positive leading
    /// coefficient, proportional to `self`.
    pub fn to_primitive_int(&self) -> IntPoly {
        let p = self.primitive_positive();
        let p = if p.leading().is_some_and(|l| l.is_negative()) {
            p.scale(&-BigRational::one())
        } else {
            p
        };
        IntPoly::new(p.coeffs.iter().map(|c| c.to_integer()).collect())
    }

    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.make_monic()
    }

    /// `p(scale · x) / scale^deg`, monic when `p` is monic. Roots get divided
    /// by `scale`.
    pub fn rescale_roots(&self, scale: &BigRational) -> Self {
        let deg = match self.degree() {
            Some(d) => d,
            None => return Self::zero(),
        };
        let mut power = BigRational::one();
        let mut coeffs = Vec::with_capacity(deg + 1);
        for c in &self.coeffs {
            coeffs.push(c * &power);
            power = &power * scale;
        }
        let lead_scale = coeffs[deg].clone();
        Self::new(coeffs).scale(&(BigRational::one() / lead_scale))
    }

    pub fn sturm_sequence(&self) -> SturmSequence {
        SturmSequence::new(self)
    }
}

impl IntPoly {
    pub fn to_rational(&self) -> RatPoly {
        RatPoly::from_int_poly(self)
    }

    /// Exact quotient by a monic divisor, `None` if the remainder is nonzero.
    pub fn exact_div_monic(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem_monic(divisor);
        r.is_zero().then_some(q)
    }
}

impl<T: Scalar + fmt::Display + Signed> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar + fmt::Display + Signed> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `det(xI - m)` by Berkowitz's division-free recurrence. Every intermediate
/// quantity stays in the entry ring, so for integer input nothing leaves `Z`.
pub fn char_poly<T: Scalar>(m: &SquareMatrix<T>) -> Poly<T> {
    let n = m.dim();
    // coefficient vectors are kept highest degree first while recursing
    let mut vec = vec![T::one(), m.get(n - 1, n - 1).neg_ref()];
    for k in (0..n - 1).rev() {
        let s = n - k - 1;
        let a = m.get(k, k);
        let r: Vec<T> = (k + 1..n).map(|j| m.get(k, j).clone()).collect();
        let mut c: Vec<T> = (k + 1..n).map(|i| m.get(i, k).clone()).collect();
        let mut t = Vec::with_capacity(s + 2);
        t.push(T::one());
        t.push(a.neg_ref());
        for _ in 0..s {
            let rc = r
                .iter()
                .zip(&c)
                .fold(T::zero(), |acc, (x, y)| acc.add_ref(&x.mul_ref(y)));
            t.push(rc.neg_ref());
            c = (0..s)
                .map(|i| {
                    (0..s).fold(T::zero(), |acc, j| {
                        acc.add_ref(&m.get(k + 1 + i, k + 1 + j).mul_ref(&c[j]))
                    })
                })
                .collect();
        }
        let next: Vec<T> = (0..s + 2)
            .map(|i| {
                (0..=i.min(s)).fold(T::zero(), |acc, j| acc.add_ref(&t[i - j].mul_ref(&vec[j])))
            })
            .collect();
        vec = next;
    }
    vec.reverse();
    Poly::new(vec)
}

/// Monic polynomial of least degree annihilating `m`, found as the first
/// linear dependency among `I, m, m², …`.
pub fn minimal_poly(m: &RatMatrix) -> RatPoly {
    let n = m.dim();
    let mut powers: Vec<Vec<BigRational>> = Vec::new();
    let mut span = Span::new(n * n);
    let mut current = RatMatrix::identity(n);
    loop {
        let flat = current.flatten();
        if span.contains(&flat) {
            // columns I, m, …, m^{k-1}, m^k; their kernel is one-dimensional
            let k = powers.len();
            let rows: Vec<Vec<BigRational>> = (0..n * n)
                .map(|e| {
                    powers
                        .iter()
                        .map(|p| p[e].clone())
                        .chain(std::iter::once(flat[e].clone()))
                        .collect()
                })
                .collect();
            let ker = linalg::kernel(&rows, k + 1);
            let v = ker
                .into_iter()
                .find(|v| !v[k].is_zero())
                .expect("dependency involves the newest power");
            return RatPoly::new(v).make_monic();
        }
        span.insert(&flat);
        powers.push(flat);
        current = &current * m;
    }
}

/// Content-normalized `gcd(f, f')` together with the squarefree part
/// `f / gcd(f, f')`, both primitive with positive leading coefficient.
pub fn poly_gcd_and_squarefree(f: &IntPoly) -> Result<(IntPoly, IntPoly), ExactError> {
    if f.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let fr = f.to_rational();
    let g = fr.gcd(&fr.derivative());
    let g = if g.is_zero() { RatPoly::one() } else { g };
    let (q, _) = fr.div_rem(&g);
    Ok((g.to_primitive_int(), q.to_primitive_int()))
}

/// Sturm chain of the squarefree part of a rational polynomial. Counts
/// distinct real roots in half-open intervals `(a, b]`.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<RatPoly>,
}

impl SturmSequence {
    pub fn new(p: &RatPoly) -> Self {
        let p0 = p.squarefree_part();
        let mut chain = vec![p0.primitive_positive()];
        if p0.degree().unwrap_or(0) > 0 {
            chain.push(p0.derivative().primitive_positive());
            loop {
                let len = chain.len();
                let (_, r) = chain[len - 2].div_rem(&chain[len - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(r.scale(&-BigRational::one()).primitive_positive());
            }
        }
        Self { chain }
    }

    pub fn polynomial(&self) -> &RatPoly {
        &self.chain[0]
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    fn sign(x: &BigRational) -> i8 {
        if x.is_positive() {
            1
        } else if x.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.chain.iter().map(|p| Self::sign(&p.eval(x))))
    }

    pub fn variations_at_pos_infinity(&self) -> usize {
        Self::variations(
            self.chain
                .iter()
                .map(|p| p.leading().map_or(0, Self::sign)),
        )
    }

    /// Distinct real roots in `(a, b]`.
    pub fn count_in(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Distinct real roots strictly greater than `a`.
    pub fn count_above(&self, a: &BigRational) -> usize {
        self.variations_at(a)
            .saturating_sub(self.variations_at_pos_infinity())
    }
}
