//! Unknown scalar functions of a generator, with formal derivatives.
//!
//! Symbols are interned in a process-wide table so that [`FuncSymbol`] is a
//! small `Copy` key. Interning the same `(name, label, dependency)` twice
//! yields the same base id.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use once_cell::sync::Lazy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(u32);

/// What a symbol depends on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dependency {
    /// A function of the order-0 jet variable of this generator.
    Generator(u8),
    /// A constant parameter: every derivative vanishes.
    Constant,
}

#[derive(Clone, Debug)]
struct SymbolInfo {
    name: String,
    label: String,
    dependency: Dependency,
}

#[derive(Default)]
struct Registry {
    infos: Vec<SymbolInfo>,
    lookup: HashMap<(String, String, Dependency), SymbolId>,
}

static REGISTRY: Lazy<RwLock<Registry>> = Lazy::new(|| RwLock::new(Registry::default()));

impl SymbolId {
    pub fn intern(name: &str, label: &str, dependency: Dependency) -> SymbolId {
        let key = (name.to_string(), label.to_string(), dependency);
        if let Some(&id) = REGISTRY.read().unwrap().lookup.get(&key) {
            return id;
        }
        let mut reg = REGISTRY.write().unwrap();
        if let Some(&id) = reg.lookup.get(&key) {
            return id;
        }
        let id = SymbolId(reg.infos.len() as u32);
        reg.infos.push(SymbolInfo {
            name: key.0.clone(),
            label: key.1.clone(),
            dependency,
        });
        reg.lookup.insert(key, id);
        id
    }

    pub fn name(self) -> String {
        REGISTRY.read().unwrap().infos[self.0 as usize].name.clone()
    }

    pub fn label(self) -> String {
        REGISTRY.read().unwrap().infos[self.0 as usize].label.clone()
    }

    pub fn dependency(self) -> Dependency {
        REGISTRY.read().unwrap().infos[self.0 as usize].dependency
    }

    /// `name^{label}`, or just `name` for an empty label.
    pub fn display_name(self) -> String {
        let reg = REGISTRY.read().unwrap();
        let info = &reg.infos[self.0 as usize];
        if info.label.is_empty() {
            info.name.clone()
        } else {
            format!("{}^{{{}}}", info.name, info.label)
        }
    }

    pub fn at(self, order: u16) -> FuncSymbol {
        FuncSymbol { base: self, order }
    }
}

/// A symbol `F^{(order)}`: the `order`-th formal derivative of the base
/// function with respect to the generator it depends on.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncSymbol {
    pub base: SymbolId,
    pub order: u16,
}

impl FuncSymbol {
    /// A function of generator `generator`.
    pub fn function(name: &str, label: &str, generator: u8) -> FuncSymbol {
        SymbolId::intern(name, label, Dependency::Generator(generator)).at(0)
    }

    /// A constant parameter.
    pub fn constant(name: &str) -> FuncSymbol {
        SymbolId::intern(name, "", Dependency::Constant).at(0)
    }

    /// The next formal derivative, or `None` for a constant.
    pub fn derivative(self) -> Option<FuncSymbol> {
        match self.base.dependency() {
            Dependency::Constant => None,
            Dependency::Generator(_) => Some(FuncSymbol {
                base: self.base,
                order: self.order + 1,
            }),
        }
    }

    pub fn generator(self) -> Option<u8> {
        match self.base.dependency() {
            Dependency::Generator(g) => Some(g),
            Dependency::Constant => None,
        }
    }
}

impl fmt::Display for FuncSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base.display_name())?;
        match self.order {
            0 => Ok(()),
            1..=3 => write!(f, "{}", "'".repeat(self.order as usize)),
            n => write!(f, "^({n})"),
        }
    }
}

impl fmt::Debug for FuncSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
