use num_bigint::BigUint;

use super::{sparse, Definition, PcPresentation, SparseWord, Violation};
use crate::abelian::is_prime;
use crate::gf::Echelon;
use crate::presentation::Presentation;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum PqError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("max_class must be at least 1")]
    ZeroClass,
    #[error("more than {cap} pc generators needed")]
    GeneratorCap { cap: usize },
    #[error("pc presentation is inconsistent ({} failing tests)", .0.len())]
    Inconsistent(Vec<Violation>),
    #[error("generator a{0} of weight above one is defined as an image")]
    ImageDefinition(usize),
    #[error("malformed pc presentation: {0}")]
    Malformed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PqLimits {
    pub max_class: usize,
    pub max_generators: usize,
}

impl Default for PqLimits {
    fn default() -> Self {
        PqLimits {
            max_class: 64,
            max_generators: 256,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PqResult {
    pub pc: PcPresentation,
    /// Exponent-p class of the computed quotient.
    pub class: usize,
    /// True when the next layer was shown to be empty, so the pc presents
    /// the largest p-quotient of the group and not a truncation.
    pub complete: bool,
    /// Image of each defining generator as a normal word.
    pub images: Vec<Vec<u32>>,
}

impl PqResult {
    /// `log_p` of the order of the computed quotient.
    pub fn order_exponent(&self) -> usize {
        self.pc.num_generators()
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.pc.prime()).pow(self.order_exponent() as u32)
    }

    /// `|G/P_1|, |G/P_2|, ..., |G/P_c|`.
    pub fn series_orders(&self) -> Vec<BigUint> {
        self.pc.series_orders()
    }
}

enum TailSource {
    Image(usize),
    Power(usize),
    Commutator(usize, usize),
}

/// The p-quotient of `pres` up to exponent-p class `max_class`, with the
/// default generator cap.
pub fn p_quotient(pres: &Presentation, prime: u64, max_class: usize) -> Result<PqResult, PqError> {
    p_quotient_with_limits(
        pres,
        prime,
        &PqLimits {
            max_class,
            ..Default::default()
        },
    )
}

/// Builds `G/P_1, G/P_2, ...` one layer at a time until a layer comes out
/// empty or `max_class` is reached. A run that reaches `max_class` computes
/// one further layer to decide whether the result is complete.
pub fn p_quotient_with_limits(
    pres: &Presentation,
    prime: u64,
    limits: &PqLimits,
) -> Result<PqResult, PqError> {
    if !is_prime(prime) || prime > u32::MAX as u64 {
        return Err(PqError::NotPrime(prime));
    }
    if limits.max_class == 0 {
        return Err(PqError::ZeroClass);
    }
    let mut pc = PcPresentation::trivial(prime as u32);
    let mut images: Vec<Vec<u32>> = vec![Vec::new(); pres.num_generators()];
    loop {
        let class = pc.class();
        let (next, next_images) = extend(&pc, Some((pres, &images)), limits.max_generators)?;
        if next.num_generators() == pc.num_generators() {
            return Ok(PqResult {
                pc,
                class,
                complete: true,
                images,
            });
        }
        if class == limits.max_class {
            return Ok(PqResult {
                pc,
                class,
                complete: false,
                images,
            });
        }
        pc = next;
        images = next_images.expect("images are carried along");
    }
}

/// The p-covering group `F/[R,F]R^p` of the group `F/R` presented by the
/// consistent pc presentation `pc`. Its new top layer is the
/// p-multiplicator `R/[R,F]R^p`.
pub fn p_cover(pc: &PcPresentation) -> Result<PcPresentation, PqError> {
    p_cover_with_cap(pc, PqLimits::default().max_generators)
}

pub fn p_cover_with_cap(
    pc: &PcPresentation,
    max_generators: usize,
) -> Result<PcPresentation, PqError> {
    let violations = pc.consistency_check();
    if !violations.is_empty() {
        return Err(PqError::Inconsistent(violations));
    }
    if let Some(i) = (0..pc.num_generators())
        .find(|&i| pc.weights[i] > 1 && matches!(pc.definitions[i], Definition::Image(_)))
    {
        return Err(PqError::ImageDefinition(i + 1));
    }
    Ok(extend(pc, None, max_generators)?.0)
}

/// Images of the defining generators as normal words.
type Images = Vec<Vec<u32>>;

/// Adds one layer. Every relation that is not a definition gets a new
/// central tail generator of order p, as does the image of every defining
/// generator that does not define a pc generator. The tails are then cut
/// down by the consistency tests and, when `defining` is given, by the
/// defining relators; the tails that survive become the new layer.
fn extend(
    pc: &PcPresentation,
    defining: Option<(&Presentation, &[Vec<u32>])>,
    max_generators: usize,
) -> Result<(PcPresentation, Option<Images>), PqError> {
    let test_weight = pc.class() + 1;
    let n = pc.num_generators();
    let p = pc.prime;
    let weight = pc.class() + 1;

    let mut sources = Vec::new();
    if let Some((pres, _)) = defining {
        for x in 0..pres.num_generators() {
            if !pc.definitions.contains(&Definition::Image(x)) {
                sources.push(TailSource::Image(x));
            }
        }
    }
    let num_image_tails = sources.len();
    for i in 0..n {
        if pc.definitions[i..]
            .iter()
            .all(|d| *d != Definition::Power(i))
        {
            sources.push(TailSource::Power(i));
        }
    }
    // [a_j, a_i] lies in P_{w_i + w_j - 1}, which is trivial in the new
    // quotient once w_i + w_j exceeds the new weight.
    for j in 0..n {
        for i in 0..j {
            if pc.weights[i] + pc.weights[j] <= weight
                && pc.definitions[j..]
                    .iter()
                    .all(|d| *d != Definition::Commutator(j, i))
            {
                sources.push(TailSource::Commutator(j, i));
            }
        }
    }
    let m = sources.len();

    // The presentation with all tails attached.
    let mut ext = pc.clone();
    ext.weights.extend(std::iter::repeat_n(weight, m));
    ext.definitions.extend((0..m).map(|k| match sources[k] {
        TailSource::Image(x) => Definition::Image(x),
        TailSource::Power(i) => Definition::Power(i),
        TailSource::Commutator(j, i) => Definition::Commutator(j, i),
    }));
    ext.power.extend(std::iter::repeat_n(Vec::new(), m));
    for t in 0..m {
        ext.comm.push(vec![Vec::new(); n + t]);
    }
    for (k, s) in sources.iter().enumerate() {
        match *s {
            TailSource::Power(i) => ext.power[i].push((n + k, 1)),
            TailSource::Commutator(j, i) => ext.comm[j][i].push((n + k, 1)),
            TailSource::Image(_) => {}
        }
    }
    let mut images: Option<Vec<Vec<u32>>> = defining.map(|(pres, imgs)| {
        (0..pres.num_generators())
            .map(|x| {
                let mut e = imgs[x].clone();
                e.resize(n + m, 0);
                e
            })
            .collect()
    });
    if let Some(imgs) = images.as_mut() {
        for (k, s) in sources.iter().enumerate() {
            if let TailSource::Image(x) = *s {
                imgs[x][n + k] = 1;
            }
        }
    }

    // Image tails first, then relation tails latest first: the columns
    // listed first are the ones solved for.
    let order: Vec<usize> = (0..num_image_tails)
        .chain((num_image_tails..m).rev())
        .collect();
    let mut column = vec![0; m];
    for (c, &k) in order.iter().enumerate() {
        column[k] = c;
    }
    // Linear relations among the tails.
    let mut relations = Echelon::new(p as u64);
    let mut broken = Vec::new();
    ext.consistency_tests(n, test_weight, |label, left, right| {
        if left[..n] != right[..n] {
            broken.push(Violation {
                test: label(),
                left: left[..n].to_vec(),
                right: right[..n].to_vec(),
            });
            return;
        }
        if left[n..] != right[n..] {
            relations.insert(
                order
                    .iter()
                    .map(|&k| ((left[n + k] + p - right[n + k]) % p) as u64)
                    .collect(),
            );
        }
    });
    if !broken.is_empty() {
        return Err(PqError::Inconsistent(broken));
    }
    if let (Some((pres, _)), Some(imgs)) = (defining, images.as_ref()) {
        let inverses: Vec<Vec<u32>> = imgs.iter().map(|w| ext.inverse(w)).collect();
        for r in pres.relators() {
            let mut e = vec![0u32; n + m];
            for l in r.letters() {
                let w = if l.is_inverse() {
                    &inverses[l.gen()]
                } else {
                    &imgs[l.gen()]
                };
                ext.mul(&mut e, w);
            }
            if e[..n].iter().any(|&x| x != 0) {
                return Err(PqError::Malformed(
                    "relator image outside the new layer".into(),
                ));
            }
            relations.insert(order.iter().map(|&k| e[n + k] as u64).collect());
        }
    }

    let (matrix, pivots) = relations.into_reduced();
    let mut pivot_row = vec![None; m];
    for (r, &c) in pivots.iter().enumerate() {
        pivot_row[order[c]] = Some(r);
    }
    let survivors: Vec<usize> = (0..m).filter(|&k| pivot_row[k].is_none()).collect();
    let s = survivors.len();
    if n + s > max_generators {
        return Err(PqError::GeneratorCap {
            cap: max_generators,
        });
    }
    let mut new_index = vec![usize::MAX; m];
    for (idx, &k) in survivors.iter().enumerate() {
        new_index[k] = idx;
    }
    // Each tail as an exponent vector over the survivors.
    let value: Vec<Vec<u32>> = (0..m)
        .map(|k| {
            let mut v = vec![0u32; s];
            match pivot_row[k] {
                None => v[new_index[k]] = 1,
                Some(r) => {
                    for (idx, &f) in survivors.iter().enumerate() {
                        v[idx] = ((p as u64 - matrix[r][column[f]]) % p as u64) as u32;
                    }
                }
            }
            v
        })
        .collect();
    let substitute = |w: &[u32]| -> Vec<u32> {
        let mut e = w[..n].to_vec();
        let mut top = vec![0u32; s];
        for k in 0..m {
            let x = w[n + k];
            if x == 0 {
                continue;
            }
            for (t, v) in top.iter_mut().zip(&value[k]) {
                *t = (*t + x * v) % p;
            }
        }
        e.extend(top);
        e
    };
    let substitute_sparse = |w: &SparseWord| -> SparseWord {
        let mut e = vec![0u32; n + m];
        for &(g, x) in w {
            e[g] = x;
        }
        sparse(&substitute(&e))
    };

    let mut next = PcPresentation {
        prime: p,
        weights: pc.weights.clone(),
        power: ext.power[..n].iter().map(&substitute_sparse).collect(),
        comm: (0..n)
            .map(|j| (0..j).map(|i| substitute_sparse(&ext.comm[j][i])).collect())
            .collect(),
        definitions: pc.definitions.clone(),
    };
    for &k in &survivors {
        let idx = next.weights.len();
        next.weights.push(weight);
        next.power.push(Vec::new());
        next.comm.push(vec![Vec::new(); idx]);
        next.definitions.push(ext.definitions[n + k].clone());
    }
    let images = images.map(|imgs| imgs.iter().map(|w| substitute(w)).collect());
    Ok((next, images))
}
