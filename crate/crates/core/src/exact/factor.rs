use crate::scalar::Scalar;

/// A nonnegative table over an ordered scope of variables.
///
/// Values are stored row-major with the last scope variable varying
/// fastest, the same layout as CPT rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor<T> {
    vars: Vec<usize>,
    cards: Vec<usize>,
    values: Vec<T>,
}

fn strides(cards: &[usize]) -> Vec<usize> {
    let mut out = vec![1; cards.len()];
    for k in (0..cards.len().saturating_sub(1)).rev() {
        out[k] = out[k + 1] * cards[k + 1];
    }
    out
}

/// Stride of each `target` variable inside a factor with scope `vars`;
/// zero for variables the factor does not mention.
fn strides_in(target: &[usize], vars: &[usize], cards: &[usize]) -> Vec<usize> {
    let own = strides(cards);
    target
        .iter()
        .map(|v| vars.iter().position(|w| w == v).map_or(0, |k| own[k]))
        .collect()
}

/// Walks every configuration of `cards`, tracking linear offsets into
/// tables laid out with the given per-variable strides.
fn walk<const N: usize>(cards: &[usize], strides: [&[usize]; N], mut visit: impl FnMut([usize; N])) {
    let total: usize = cards.iter().product();
    let n = cards.len();
    let mut counter = vec![0usize; n];
    let mut offsets = [0usize; N];
    for _ in 0..total {
        visit(offsets);
        for pos in (0..n).rev() {
            counter[pos] += 1;
            for (o, s) in offsets.iter_mut().zip(strides.iter()) {
                *o += s[pos];
            }
            if counter[pos] < cards[pos] {
                break;
            }
            for (o, s) in offsets.iter_mut().zip(strides.iter()) {
                *o -= s[pos] * cards[pos];
            }
            counter[pos] = 0;
        }
    }
}

impl<T: Scalar> Factor<T> {
    pub fn new(vars: Vec<usize>, cards: Vec<usize>, values: Vec<T>) -> Self {
        assert_eq!(vars.len(), cards.len());
        assert_eq!(values.len(), cards.iter().product::<usize>());
        Self { vars, cards, values }
    }

    /// The constant factor 1 over the empty scope.
    pub fn unit() -> Self {
        Self::new(Vec::new(), Vec::new(), vec![T::one()])
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn mentions(&self, var: usize) -> bool {
        self.vars.contains(&var)
    }

    pub fn total(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc + v.clone())
    }

    pub fn product(&self, other: &Factor<T>) -> Factor<T> {
        let mut vars = self.vars.clone();
        let mut cards = self.cards.clone();
        for (v, c) in other.vars.iter().zip(&other.cards) {
            if !vars.contains(v) {
                vars.push(*v);
                cards.push(*c);
            }
        }
        let sa = strides_in(&vars, &self.vars, &self.cards);
        let sb = strides_in(&vars, &other.vars, &other.cards);
        let mut values = Vec::with_capacity(cards.iter().product());
        walk(&cards, [&sa, &sb], |[a, b]| {
            values.push(self.values[a].clone() * other.values[b].clone());
        });
        Factor { vars, cards, values }
    }

    pub fn sum_out(&self, var: usize) -> Factor<T> {
        let Some(k) = self.vars.iter().position(|&v| v == var) else {
            return self.clone();
        };
        let mut vars = self.vars.clone();
        let mut cards = self.cards.clone();
        vars.remove(k);
        cards.remove(k);
        let dst = strides_in(&self.vars, &vars, &cards);
        let src = strides(&self.cards);
        let mut values = vec![T::zero(); cards.iter().product()];
        walk(&self.cards, [&src, &dst], |[s, d]| {
            values[d] = values[d].clone() + self.values[s].clone();
        });
        Factor { vars, cards, values }
    }

    /// Slices out every variable fixed by `assignment` (indexed by variable).
    pub fn restrict(&self, assignment: &[Option<usize>]) -> Factor<T> {
        let own = strides(&self.cards);
        let mut base = 0;
        let mut vars = Vec::new();
        let mut cards = Vec::new();
        let mut kept_strides = Vec::new();
        for (k, &v) in self.vars.iter().enumerate() {
            match assignment.get(v).copied().flatten() {
                Some(state) => base += state * own[k],
                None => {
                    vars.push(v);
                    cards.push(self.cards[k]);
                    kept_strides.push(own[k]);
                }
            }
        }
        if vars.len() == self.vars.len() {
            return self.clone();
        }
        let mut values = Vec::with_capacity(cards.iter().product());
        walk(&cards, [&kept_strides], |[s]| {
            values.push(self.values[base + s].clone());
        });
        Factor { vars, cards, values }
    }

    /// Reorders the scope to `order`, which must be a permutation of it.
    pub fn permuted(&self, order: &[usize]) -> Factor<T> {
        assert_eq!(order.len(), self.vars.len());
        let cards: Vec<usize> = order
            .iter()
            .map(|v| {
                let k = self.vars.iter().position(|w| w == v).expect("var in scope");
                self.cards[k]
            })
            .collect();
        let src = strides_in(order, &self.vars, &self.cards);
        let mut values = Vec::with_capacity(self.values.len());
        walk(&cards, [&src], |[s]| values.push(self.values[s].clone()));
        Factor {
            vars: order.to_vec(),
            cards,
            values,
        }
    }
}
