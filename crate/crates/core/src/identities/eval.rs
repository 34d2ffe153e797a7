//! The identities as exact functions of an [`Assignment`].

use std::collections::{BTreeMap, HashMap};

use super::{Assignment, IdentityError, IdentityId, IdentityTag};
use crate::patterns::row_range;
use crate::qnum::{qbracket, QValue, Rational};

/// Bracket cache plus pole bookkeeping for one evaluation.
pub(crate) struct Ctx<'a> {
    id: String,
    qv: &'a QValue,
    cache: HashMap<i64, Rational>,
}

impl<'a> Ctx<'a> {
    pub(crate) fn new(id: impl Into<String>, qv: &'a QValue) -> Self {
        Ctx { id: id.into(), qv, cache: HashMap::new() }
    }

    fn br(&mut self, x: i64) -> Result<Rational, IdentityError> {
        if let Some(v) = self.cache.get(&x) {
            return Ok(v.clone());
        }
        let v = qbracket(x, self.qv)?;
        self.cache.insert(x, v.clone());
        Ok(v)
    }

    fn q(&self) -> Result<Rational, IdentityError> {
        match self.qv {
            QValue::Quantum(q) => Ok(q.clone()),
            QValue::Classical => Err(IdentityError::BadAssignment(format!("{} needs a rational q", self.id))),
        }
    }

    fn pole(&self, factor: String) -> IdentityError {
        IdentityError::Pole { identity: self.id.clone(), factor }
    }

    /// `num / [x]`, naming the bracket if it vanishes.
    fn over_bracket(&mut self, num: Rational, x: i64, label: impl FnOnce() -> String) -> Result<Rational, IdentityError> {
        let d = self.br(x)?;
        if d.is_zero() {
            return Err(self.pole(format!("{} = [0]", label())));
        }
        Ok(num / d)
    }

    fn over(&self, num: Rational, d: &Rational, label: impl FnOnce() -> String) -> Result<Rational, IdentityError> {
        if d.is_zero() {
            return Err(self.pole(format!("{} = 0", label())));
        }
        Ok(num / d.clone())
    }
}

/// L-rows with their index ranges.
struct Rows<'a>(&'a BTreeMap<usize, Vec<i64>>);

impl Rows<'_> {
    fn check(a: &Assignment, needed: &[usize]) -> Result<(), IdentityError> {
        for &p in needed {
            let len = a.rows.get(&p).map_or(0, |r| r.len());
            if len != p {
                return Err(IdentityError::BadAssignment(format!("row {p} needs {p} entries, got {len}")));
            }
        }
        Ok(())
    }

    fn get(&self, i: i64, p: usize) -> i64 {
        let start = *row_range(p).start();
        self.0[&p][(i - start) as usize]
    }

    fn sum(&self, p: usize) -> i64 {
        self.0.get(&p).map_or(0, |r| r.iter().sum())
    }
}

fn label(i: i64, p: usize, j: i64, r: usize, shift: i64) -> String {
    format!("[L({i},{p}) - L({j},{r}) {} {}]", if shift < 0 { '-' } else { '+' }, shift.abs())
}

/// The three parts of I23a (`sigma = 1`) or I23b (`sigma = -1`):
/// the `s = 0` and `s = 1` double sums and the bracket subtracted on the right.
///
/// With `u = sigma s`, `j` running over row `jr` and `l` over row `lr = jr + 1`,
/// each summand is
/// `prod_{lr, != l}[L_i - L_j + u - sigma] prod_{below}[L_i - L_j + u - sigma]
///  prod_{above}[L_i - L_l + u] prod_{jr, != j}[L_i - L_l + u]`
/// over `prod_{jr, != j}[L_i - L_j + u][L_i - L_j + u - sigma]
///  prod_{lr, != l}[L_i - L_l + u][L_i - L_l + u - sigma]`.
fn i23_parts(ctx: &mut Ctx, rows: &Rows, k: i64, sigma: i64) -> Result<[Rational; 3], IdentityError> {
    let jr = if sigma > 0 { 2 * k - 1 } else { 2 * k } as usize;
    let (below, lr, above) = (jr - 1, jr + 1, jr + 2);
    let mut parts = [Rational::zero(), Rational::zero(), Rational::zero()];
    for s in 0..2i64 {
        let u = sigma * s;
        let mut total = Rational::zero();
        for j in row_range(jr) {
            let lj = rows.get(j, jr);
            for l in row_range(lr) {
                let ll = rows.get(l, lr);
                let mut t = Rational::one();
                for i in row_range(lr).filter(|&i| i != l) {
                    t *= ctx.br(rows.get(i, lr) - lj + u - sigma)?;
                }
                for i in row_range(below) {
                    t *= ctx.br(rows.get(i, below) - lj + u - sigma)?;
                }
                for i in row_range(above) {
                    t *= ctx.br(rows.get(i, above) - ll + u)?;
                }
                for i in row_range(jr).filter(|&i| i != j) {
                    t *= ctx.br(rows.get(i, jr) - ll + u)?;
                }
                for i in row_range(jr).filter(|&i| i != j) {
                    let d = rows.get(i, jr) - lj + u;
                    t = ctx.over_bracket(t, d, || label(i, jr, j, jr, u))?;
                    t = ctx.over_bracket(t, d - sigma, || label(i, jr, j, jr, u - sigma))?;
                }
                for i in row_range(lr).filter(|&i| i != l) {
                    let d = rows.get(i, lr) - ll + u;
                    t = ctx.over_bracket(t, d, || label(i, lr, l, lr, u))?;
                    t = ctx.over_bracket(t, d - sigma, || label(i, lr, l, lr, u - sigma))?;
                }
                total += t;
            }
        }
        parts[s as usize] = if s == 1 { -total } else { total };
    }
    let x = rows.sum(jr) - rows.sum(below) - rows.sum(above) + rows.sum(lr);
    parts[2] = ctx.br(sigma * x - 1)?;
    Ok(parts)
}

/// `(S_0, S_1, [X - 1])` for I23a at level `k`; the identity is `S_0 + S_1 - [X - 1] = 0`.
pub fn i23a_parts(k: i64, a: &Assignment) -> Result<[Rational; 3], IdentityError> {
    Rows::check(a, &[(2 * k - 2) as usize, (2 * k - 1) as usize, (2 * k) as usize, (2 * k + 1) as usize])?;
    let mut ctx = Ctx::new(format!("I23a:{k}"), &a.qv);
    i23_parts(&mut ctx, &Rows(&a.rows), k, 1)
}

/// Half `s` of the I24 sums: center row `c`, a fully present row `full` and
/// a row `excl` with the labels in `skip` removed; `u = sigma s`.
#[allow(clippy::too_many_arguments)]
fn i24_half(
    ctx: &mut Ctx,
    rows: &Rows,
    c: usize,
    full: usize,
    excl: usize,
    skip: &[i64],
    sigma: i64,
    s: i64,
) -> Result<Rational, IdentityError> {
    let u = sigma * s;
    let mut total = Rational::zero();
    for x in row_range(c) {
        let lx = rows.get(x, c);
        let mut t = Rational::one();
        for i in row_range(full) {
            t *= ctx.br(rows.get(i, full) - lx + u)?;
        }
        for i in row_range(excl).filter(|i| !skip.contains(i)) {
            t *= ctx.br(rows.get(i, excl) - lx + u)?;
        }
        for i in row_range(c).filter(|&i| i != x) {
            let d = rows.get(i, c) - lx + u;
            t = ctx.over_bracket(t, d, || label(i, c, x, c, u))?;
            t = ctx.over_bracket(t, d - sigma, || label(i, c, x, c, u - sigma))?;
        }
        total += t;
    }
    Ok(if s == 1 { -total } else { total })
}

/// Row layout `(center, full, excluded, sigma)` of I24a-d at level `k`.
pub(crate) fn i24_layout(tag: IdentityTag, k: i64) -> (usize, usize, usize, i64) {
    let r = |x: i64| x as usize;
    match tag {
        IdentityTag::I24a => (r(2 * k), r(2 * k + 1), r(2 * k - 1), 1),
        IdentityTag::I24b => (r(2 * k + 1), r(2 * k + 2), r(2 * k), -1),
        IdentityTag::I24c => (r(2 * k - 1), r(2 * k - 2), r(2 * k), -1),
        IdentityTag::I24d => (r(2 * k), r(2 * k - 1), r(2 * k + 1), 1),
        _ => unreachable!("not an I24 identity"),
    }
}

/// Half `s` of I24a-d.
pub(crate) fn i24_half_of(id: IdentityId, a: &Assignment, s: i64) -> Result<Rational, IdentityError> {
    let k = id.k();
    let (c, full, excl, sigma) = i24_layout(id.tag, k);
    Rows::check(a, &[c, full, excl])?;
    let range = row_range(excl);
    if a.excluded.len() != 2 || a.excluded[0] == a.excluded[1] || !a.excluded.iter().all(|x| range.contains(x)) {
        return Err(IdentityError::BadAssignment(format!(
            "{id} needs two distinct excluded labels in row {excl}, got {:?}",
            a.excluded
        )));
    }
    let mut ctx = Ctx::new(id.to_string(), &a.qv);
    i24_half(&mut ctx, &Rows(&a.rows), c, full, excl, &a.excluded, sigma, s)
}

/// Half `s` of A26: `(-1)^s sum_i prod_b[a_i - b - s] prod_c[a_i - c - s]
/// / prod_{t != i}[a_i - a_t - s][a_i - a_t - s + 1]`.
pub fn a26_half(a: &[i64], b: &[i64], c: &[i64], qv: &QValue, s: i64) -> Result<Rational, IdentityError> {
    let n = a.len();
    if n == 0 || b.len() + 1 != n || c.len() + 1 != n {
        return Err(IdentityError::BadAssignment(format!(
            "A26 needs |a| = n >= 1 and |b| = |c| = n - 1, got {}, {}, {}",
            n,
            b.len(),
            c.len()
        )));
    }
    let mut ctx = Ctx::new(format!("A26:{n}"), qv);
    let mut total = Rational::zero();
    for i in 0..n {
        let mut t = Rational::one();
        for x in b.iter().chain(c) {
            t *= ctx.br(a[i] - x - s)?;
        }
        for tt in (0..n).filter(|&tt| tt != i) {
            let d = a[i] - a[tt] - s;
            t = ctx.over_bracket(t, d, || format!("[a_{} - a_{} - {s}]", i + 1, tt + 1))?;
            t = ctx.over_bracket(t, d + 1, || format!("[a_{} - a_{} - {s} + 1]", i + 1, tt + 1))?;
        }
        total += t;
    }
    Ok(if s == 1 { -total } else { total })
}

/// The two halves of A26 in multiplicative form, with `A_i = q^(2 a_i)`,
/// `B_t = q^(2 b_t)`, `C_t = q^(2 c_t)` and
/// `pre = prod A / (q^(n-1) prod q^b prod q^c)`:
/// `pre sum_i prod(A_i - q^2 B_t)(A_i - q^2 C_t) / (A_i prod_{t != i}(A_i - A_t)(A_i - q^2 A_t))`
/// and
/// `-pre sum_i prod(A_i - B_t)(A_i - C_t) / (A_i prod_{t != i}(A_i - A_t)(A_i - q^-2 A_t))`.
pub fn a27_halves(a: &[i64], b: &[i64], c: &[i64], qv: &QValue) -> Result<[Rational; 2], IdentityError> {
    let n = a.len();
    let ctx = Ctx::new(format!("A27:{n}"), qv);
    let q = ctx.q()?;
    let q2 = q.pow(2)?;
    let pw = |x: i64| q.pow(x);
    let av: Vec<Rational> = a.iter().map(|&x| pw(2 * x)).collect::<Result<_, _>>()?;
    let bv: Vec<Rational> = b.iter().map(|&x| pw(2 * x)).collect::<Result<_, _>>()?;
    let cv: Vec<Rational> = c.iter().map(|&x| pw(2 * x)).collect::<Result<_, _>>()?;
    let mut pre: Rational = av.iter().cloned().product();
    pre = pre / pw(n as i64 - 1)?;
    for x in b.iter().chain(c) {
        pre = pre / pw(*x)?;
    }
    let mut h0 = Rational::zero();
    let mut h1 = Rational::zero();
    for i in 0..n {
        let ai = &av[i];
        let mut t1: Rational = bv.iter().chain(&cv).map(|x| ai - &(&q2 * x)).product();
        let mut t2: Rational = bv.iter().chain(&cv).map(|x| ai - x).product();
        t1 = ctx.over(t1, ai, || format!("A_{}", i + 1))?;
        t2 = ctx.over(t2, ai, || format!("A_{}", i + 1))?;
        for t in (0..n).filter(|&t| t != i) {
            let d = ai - &av[t];
            t1 = ctx.over(t1, &d, || format!("A_{} - A_{}", i + 1, t + 1))?;
            t2 = ctx.over(t2, &d, || format!("A_{} - A_{}", i + 1, t + 1))?;
            t1 = ctx.over(t1, &(ai - &(&q2 * &av[t])), || format!("A_{} - q^2 A_{}", i + 1, t + 1))?;
            t2 = ctx.over(t2, &(ai - &(&av[t] / &q2)), || format!("A_{} - q^-2 A_{}", i + 1, t + 1))?;
        }
        h0 += t1;
        h1 += t2;
    }
    Ok([&pre * &h0, -(&pre * &h1)])
}

/// The three parts of A21 in `n` variables: the two double sums (second one
/// with its minus sign) and `(q - q^-1)(1 - q^2 prod D prod C / (prod A prod B))`.
/// The identity reads `parts[0] + parts[1] - parts[2] = 0`.
pub fn a21_parts(
    n: usize,
    av: &[Rational],
    bv: &[Rational],
    cv: &[Rational],
    dv: &[Rational],
    qv: &QValue,
) -> Result<[Rational; 3], IdentityError> {
    if n < 2 || av.len() != n - 1 || bv.len() != n || cv.len() != n + 1 || dv.len() != n - 2 {
        return Err(IdentityError::BadAssignment(format!(
            "A21 with n = {n} needs |A| = n-1, |B| = n, |C| = n+1, |D| = n-2, got {}, {}, {}, {}",
            av.len(),
            bv.len(),
            cv.len(),
            dv.len()
        )));
    }
    let ctx = Ctx::new(format!("A21:{n}"), qv);
    let q = ctx.q()?;
    let q2 = q.pow(2)?;
    let qi2 = q2.recip()?;
    let mut t1 = Rational::zero();
    let mut t2 = Rational::zero();
    for j in 0..n - 1 {
        let aj = &av[j];
        for l in 0..n {
            let bl = &bv[l];
            let others_b = || (0..n).filter(move |&i| i != l);
            let others_a = || (0..n - 1).filter(move |&i| i != j);

            let mut num1 = q.clone();
            let mut num2 = q.recip()?;
            for i in others_b() {
                num1 *= aj - &(&bv[i] * &qi2);
                num2 *= aj - &bv[i];
            }
            for d in dv {
                num1 *= aj - &(d * &qi2);
                num2 *= aj - d;
            }
            for c in cv {
                num1 *= bl - c;
                num2 *= bl - &(&q2 * c);
            }
            for i in others_a() {
                num1 *= bl - &av[i];
                num2 *= bl - &(&q2 * &av[i]);
            }
            let base = aj * bl;
            let mut f1 = ctx.over(num1, &base, || format!("A_{} B_{}", j + 1, l + 1))?;
            let mut f2 = ctx.over(num2, &base, || format!("A_{} B_{}", j + 1, l + 1))?;
            for i in others_a() {
                let d = aj - &av[i];
                f1 = ctx.over(f1, &d, || format!("A_{} - A_{}", j + 1, i + 1))?;
                f2 = ctx.over(f2, &d, || format!("A_{} - A_{}", j + 1, i + 1))?;
                f1 = ctx.over(f1, &(aj - &(&av[i] * &qi2)), || format!("A_{} - q^-2 A_{}", j + 1, i + 1))?;
                f2 = ctx.over(f2, &(aj - &(&av[i] * &q2)), || format!("A_{} - q^2 A_{}", j + 1, i + 1))?;
            }
            for i in others_b() {
                let d = bl - &bv[i];
                f1 = ctx.over(f1, &d, || format!("B_{} - B_{}", l + 1, i + 1))?;
                f2 = ctx.over(f2, &d, || format!("B_{} - B_{}", l + 1, i + 1))?;
                f1 = ctx.over(f1, &(bl - &(&bv[i] * &qi2)), || format!("B_{} - q^-2 B_{}", l + 1, i + 1))?;
                f2 = ctx.over(f2, &(bl - &(&bv[i] * &q2)), || format!("B_{} - q^2 B_{}", l + 1, i + 1))?;
            }
            t1 += f1;
            t2 += f2;
        }
    }
    let top: Rational = dv.iter().chain(cv).cloned().product::<Rational>() * q2;
    let bottom: Rational = av.iter().chain(bv).cloned().product();
    let ratio = ctx.over(top, &bottom, || "prod A prod B".to_string())?;
    let last = (&q - &q.recip()?) * (Rational::one() - ratio);
    Ok([t1, -t2, last])
}

/// `LHS - RHS` of `id` at `a`; zero for every generic assignment.
pub fn evaluate_identity(id: IdentityId, a: &Assignment) -> Result<Rational, IdentityError> {
    let name = id.to_string();
    match id.tag {
        IdentityTag::I23a | IdentityTag::I23b => {
            let k = id.k();
            let sigma = if id.tag == IdentityTag::I23a { 1 } else { -1 };
            let low = if sigma > 0 { 2 * k - 2 } else { 2 * k - 1 };
            let rows: Vec<usize> = (low..=low + 3).map(|p| p as usize).collect();
            Rows::check(a, &rows)?;
            let mut ctx = Ctx::new(name, &a.qv);
            let [s0, s1, rhs] = i23_parts(&mut ctx, &Rows(&a.rows), k, sigma)?;
            Ok(s0 + s1 - rhs)
        }
        IdentityTag::I24a | IdentityTag::I24b | IdentityTag::I24c | IdentityTag::I24d => {
            Ok(i24_half_of(id, a, 0)? + i24_half_of(id, a, 1)?)
        }
        IdentityTag::A26 => {
            let n = id.k() as usize;
            let (x, y, z) = (a.array("a")?, a.array("b")?, a.array("c")?);
            if x.len() != n {
                return Err(IdentityError::BadAssignment(format!("{name} needs |a| = {n}, got {}", x.len())));
            }
            Ok(a26_half(x, y, z, &a.qv, 0)? + a26_half(x, y, z, &a.qv, 1)?)
        }
        IdentityTag::A21 => {
            let n = id.k() as usize;
            let [t1, t2, last] = a21_parts(n, a.vars("A")?, a.vars("B")?, a.vars("C")?, a.vars("D")?, &a.qv)?;
            Ok(t1 + t2 - last)
        }
        IdentityTag::I25 => {
            let (x, b, c, d, e) = (a.scalar("a")?, a.scalar("b")?, a.scalar("c")?, a.scalar("d")?, a.scalar("e")?);
            let mut ctx = Ctx::new(name, &a.qv);
            i25(&mut ctx, x, b, c, d, e)
        }
        IdentityTag::I26 => {
            let (x, b) = (a.scalar("a")?, a.scalar("b")?);
            let mut ctx = Ctx::new(name, &a.qv);
            let b2 = ctx.br(2)?;
            let left = ctx.br(x - 1)? * ctx.br(b - 1)? - &b2 * ctx.br(x)? * ctx.br(b - 1)? + ctx.br(x)? * ctx.br(b)?;
            let right = ctx.br(x - 1)? * ctx.br(b - 1)? - &b2 * ctx.br(x - 1)? * ctx.br(b)? + ctx.br(x)? * ctx.br(b)?;
            Ok(ctx.over_bracket(left, x - b + 1, || "[a-b+1]".into())?
                + ctx.over_bracket(right, x - b - 1, || "[a-b-1]".into())?)
        }
        IdentityTag::I27 => {
            let x = a.scalar("a")?;
            let mut ctx = Ctx::new(name, &a.qv);
            Ok(ctx.br(x - 1)? - ctx.br(2)? * ctx.br(x)? + ctx.br(x + 1)?)
        }
        IdentityTag::A46L | IdentityTag::A46R => {
            let (x, b, c, d) = (a.scalar("a")?, a.scalar("b")?, a.scalar("c")?, a.scalar("d")?);
            let mut ctx = Ctx::new(name, &a.qv);
            if id.tag == IdentityTag::A46L {
                let t1 = ctx.br(x - b)? * ctx.br(c - d - 1)?;
                let t2 = ctx.br(x - c + 1)? * ctx.br(b - d)?;
                Ok(ctx.over_bracket(t1, c - b - 1, || "[c-b-1]".into())?
                    + ctx.over_bracket(t2, b - c + 1, || "[b-c+1]".into())?
                    - ctx.br(x - d)?)
            } else {
                let t1 = ctx.br(x - b + 1)? * ctx.br(c - d)?;
                let t2 = ctx.br(x - c)? * ctx.br(b - d - 1)?;
                Ok(-ctx.over_bracket(t1, c - b + 1, || "[c-b+1]".into())?
                    - ctx.over_bracket(t2, b - c - 1, || "[b-c-1]".into())?
                    + ctx.br(x - d)?)
            }
        }
    }
}

fn i25(ctx: &mut Ctx, a: i64, b: i64, c: i64, d: i64, e: i64) -> Result<Rational, IdentityError> {
    let b2 = ctx.br(2)?;
    let mut br = |x: i64| ctx.br(x);
    let p1 = br(a - b - 1)? * br(c - b - 1)? - &b2 * br(a - b)? * br(c - b - 1)? + br(a - b)? * br(c - b)?;
    let p2 = br(a - b - 1)? * br(c - b - 1)? - &b2 * br(a - b - 1)? * br(c - b)? + br(a - b)? * br(c - b)?;
    let n11 = br(a - d)? * br(c - e - 1)?;
    let n12 = br(c - d - 1)? * br(a - e)?;
    let n21 = br(a - e - 1)? * br(c - d)?;
    let n22 = br(a - d - 1)? * br(c - e)?;
    let f11 = ctx.over_bracket(n11, d - e - 1, || "[d-e-1]".into())?;
    let f11 = ctx.over_bracket(f11, c - a - 1, || "[c-a-1]".into())?;
    let f12 = ctx.over_bracket(n12, d - e + 1, || "[d-e+1]".into())?;
    let f12 = ctx.over_bracket(f12, c - a - 1, || "[c-a-1]".into())?;
    let f21 = ctx.over_bracket(n21, d - e - 1, || "[d-e-1]".into())?;
    let f21 = ctx.over_bracket(f21, c - a + 1, || "[c-a+1]".into())?;
    let f22 = ctx.over_bracket(n22, d - e + 1, || "[d-e+1]".into())?;
    let f22 = ctx.over_bracket(f22, c - a + 1, || "[c-a+1]".into())?;
    Ok(p1 * (f11 + f12) + (f21 + f22) * p2)
}
