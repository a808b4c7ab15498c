//! Type-directed emission of runtime-targeting Rust from the mini
//! translator's C subset. Conversions follow C's usual arithmetic
//! conversions; pointers clone on assignment/argument passing (a handle
//! copy, matching C pointer copies); locals whose address is taken are
//! modeled as one-element `Ptr` cells.

use super::cparse::{BinOp, CExpr, CStmt, SwitchCase, UnOp};
use crate::analyzer::{BaseType, CType, FunctionSignature, IntWidth, ProjectMetadata, TypeDeclKind};
use crate::cmap::{sanitize_ident, TypeMapper};
use crate::translate::TranslateError;
use std::collections::{BTreeMap, BTreeSet};

fn oos(construct: impl Into<String>) -> TranslateError {
    TranslateError::OutOfSubset {
        construct: construct.into(),
    }
}

/// Scalar shape used for conversion decisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scalar {
    Int { bits: u8, unsigned: bool },
    Float { bits: u8 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ETy {
    Val(CType),
    Bool,
}

const LIBC_FNS: [&str; 13] = [
    "malloc", "free", "memcpy", "memmove", "memset", "strlen", "strcmp", "printf", "snprintf",
    "fopen", "fclose", "fread", "fwrite",
];

pub struct Emitter<'a> {
    metadata: &'a ProjectMetadata,
    mapper: TypeMapper<'a>,
    scopes: Vec<BTreeMap<String, CType>>,
    cells: BTreeSet<String>,
    ret: CType,
    temp: usize,
}

impl<'a> Emitter<'a> {
    pub fn new(metadata: &'a ProjectMetadata, sig: &FunctionSignature) -> Self {
        let mut scope = BTreeMap::new();
        for (n, t) in &sig.params {
            scope.insert(n.clone(), t.clone());
        }
        Emitter {
            metadata,
            mapper: TypeMapper::new(Some(metadata)),
            scopes: vec![scope],
            cells: BTreeSet::new(),
            ret: sig.return_type.clone(),
            temp: 0,
        }
    }

    pub fn emit_function_body(
        &mut self,
        sig: &FunctionSignature,
        stmts: &[CStmt],
    ) -> Result<String, TranslateError> {
        let addr_taken = collect_addr_taken(stmts);
        let mutated = collect_mutated(stmts);
        let mut out = String::from("{\n");
        for (name, ty) in &sig.params {
            let n = sanitize_ident(name);
            if addr_taken.contains(name) {
                if ty.pointer_depth > 0 && !self.is_scalarish(ty) {
                    return Err(oos(format!("address of parameter {name}")));
                }
                self.cells.insert(name.clone());
                out.push_str(&format!(
                    "    let {n}: Ptr<{}> = Ptr::alloc_one({n});\n",
                    self.rust_of(ty)?
                ));
            } else if mutated.contains(name) {
                out.push_str(&format!("    let mut {n} = {n};\n"));
            }
        }
        let body = self.emit_block(stmts, 1, &addr_taken)?;
        out.push_str(&body);
        out.push('}');
        Ok(out)
    }

    fn fresh(&mut self, base: &str) -> String {
        self.temp += 1;
        format!("__{base}{}", self.temp)
    }

    fn rust_of(&self, ty: &CType) -> Result<String, TranslateError> {
        self.mapper
            .map_type(ty)
            .map_err(|e| oos(format!("unmappable type: {e}")))
    }

    // ---- environment ----

    fn lookup_local(&self, name: &str) -> Option<&CType> {
        self.scopes.iter().rev().find_map(|s| s.get(name))
    }

    fn lookup_global(&self, name: &str) -> Option<&CType> {
        self.metadata
            .globals
            .iter()
            .find(|g| g.name == name)
            .map(|g| &g.ty)
    }

    fn lookup_enum_const(&self, name: &str) -> bool {
        self.metadata.type_decls.iter().any(|d| {
            matches!(&d.kind, TypeDeclKind::Enum { variants } if variants.iter().any(|(v, _)| v == name))
        })
    }

    fn lookup_obj_macro(&self, name: &str) -> Option<CType> {
        let m = self
            .metadata
            .macros
            .iter()
            .find(|m| m.name == name && m.params.is_none())?;
        // Emitted as a const; infer its type the same way the const mapping
        // does (i32 unless the value forces u32/i64).
        let ty = match crate::analyzer::parse_c_int_literal(m.body.trim().trim_matches(['(', ')']))
        {
            Some(v) if v > i32::MAX as i64 => CType::scalar(BaseType::Int {
                width: IntWidth::Int,
                unsigned: true,
            }),
            _ => CType::int(),
        };
        Some(ty)
    }

    fn lookup_fn_macro(&self, name: &str) -> bool {
        self.metadata
            .macros
            .iter()
            .any(|m| m.name == name && m.params.is_some())
    }

    fn lookup_fn(&self, name: &str) -> Option<&FunctionSignature> {
        self.metadata.function(name)
    }

    // ---- scalar shapes and conversions ----

    fn scalar_of(&self, ty: &CType) -> Option<Scalar> {
        if ty.pointer_depth > 0 || !ty.array_dims.is_empty() || ty.func_ptr.is_some() {
            return None;
        }
        match &ty.base {
            BaseType::Char { signed } => Some(Scalar::Int {
                bits: 8,
                unsigned: !matches!(signed, Some(true)),
            }),
            BaseType::Int { width, unsigned } => Some(Scalar::Int {
                bits: match width {
                    IntWidth::Short => 16,
                    IntWidth::Int => 32,
                    IntWidth::Long | IntWidth::LongLong => 64,
                },
                unsigned: *unsigned,
            }),
            BaseType::Float => Some(Scalar::Float { bits: 32 }),
            BaseType::Double => Some(Scalar::Float { bits: 64 }),
            BaseType::Bool => Some(Scalar::Int {
                bits: 8,
                unsigned: true,
            }),
            BaseType::Alias(name) => match name.as_str() {
                "uint8_t" => Some(Scalar::Int { bits: 8, unsigned: true }),
                "int8_t" => Some(Scalar::Int { bits: 8, unsigned: false }),
                "uint16_t" => Some(Scalar::Int { bits: 16, unsigned: true }),
                "int16_t" => Some(Scalar::Int { bits: 16, unsigned: false }),
                "uint32_t" => Some(Scalar::Int { bits: 32, unsigned: true }),
                "int32_t" => Some(Scalar::Int { bits: 32, unsigned: false }),
                "uint64_t" | "size_t" | "uintptr_t" => Some(Scalar::Int { bits: 64, unsigned: true }),
                "int64_t" | "ssize_t" | "ptrdiff_t" | "intptr_t" => {
                    Some(Scalar::Int { bits: 64, unsigned: false })
                }
                _ => self.resolve_alias(name).and_then(|t| self.scalar_of(&t)),
            },
            _ => None,
        }
    }

    fn resolve_alias(&self, name: &str) -> Option<CType> {
        self.metadata.type_decls.iter().find_map(|d| match &d.kind {
            TypeDeclKind::Typedef { target } if d.name == name => Some(target.clone()),
            TypeDeclKind::Enum { .. } if d.name == name => Some(CType::int()),
            _ => None,
        })
    }

    fn is_scalarish(&self, ty: &CType) -> bool {
        self.scalar_of(ty).is_some() || self.is_ptr(ty)
    }

    fn is_ptr(&self, ty: &CType) -> bool {
        (ty.pointer_depth > 0 && ty.func_ptr.is_none())
            || (ty.array_dims.len() == 1 && ty.array_dims[0].is_empty())
    }

    fn is_array(&self, ty: &CType) -> bool {
        !ty.array_dims.is_empty() && !ty.array_dims[0].is_empty()
    }

    fn elem_of(&self, ty: &CType) -> Result<CType, TranslateError> {
        let mut t = ty.clone();
        if self.is_array(&t) {
            t.array_dims.remove(0);
            Ok(t)
        } else if t.pointer_depth > 0 {
            t.pointer_depth -= 1;
            Ok(t)
        } else {
            Err(oos("subscript on non-pointer"))
        }
    }

    fn promote(&self, ty: &CType) -> CType {
        match self.scalar_of(ty) {
            Some(Scalar::Int { bits, .. }) if bits < 32 => CType::int(),
            _ => ty.clone(),
        }
    }

    /// C usual arithmetic conversions over the subset's widths.
    fn usual_arith(&self, l: &CType, r: &CType) -> Result<CType, TranslateError> {
        let (sl, sr) = match (self.scalar_of(l), self.scalar_of(r)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(oos("arithmetic on non-scalar")),
        };
        let mk_int = |bits: u8, unsigned: bool| {
            CType::scalar(BaseType::Int {
                width: if bits >= 64 {
                    IntWidth::Long
                } else {
                    IntWidth::Int
                },
                unsigned,
            })
        };
        match (sl, sr) {
            (Scalar::Float { bits: a }, Scalar::Float { bits: b }) => Ok(CType::scalar(
                if a.max(b) >= 64 {
                    BaseType::Double
                } else {
                    BaseType::Float
                },
            )),
            (Scalar::Float { bits }, Scalar::Int { .. })
            | (Scalar::Int { .. }, Scalar::Float { bits }) => Ok(CType::scalar(if bits >= 64 {
                BaseType::Double
            } else {
                BaseType::Float
            })),
            (Scalar::Int { .. }, Scalar::Int { .. }) => {
                // Promote both to at least int.
                let p = |s: Scalar| match s {
                    Scalar::Int { bits, unsigned } if bits >= 32 => (bits, unsigned),
                    _ => (32, false),
                };
                let (ab, au) = p(sl);
                let (bb, bu) = p(sr);
                if au == bu {
                    Ok(mk_int(ab.max(bb), au))
                } else {
                    let (ub, sb) = if au { (ab, bb) } else { (bb, ab) };
                    if ub >= sb {
                        Ok(mk_int(ub, true))
                    } else {
                        // signed type strictly wider: it represents all
                        // unsigned values (64 > 32).
                        Ok(mk_int(sb, false))
                    }
                }
            }
        }
    }

    fn same_rust(&self, a: &CType, b: &CType) -> bool {
        match (self.rust_of(a), self.rust_of(b)) {
            (Ok(x), Ok(y)) => x == y,
            _ => false,
        }
    }

    /// Convert `text` (of type `ety`) into target-type position; the target
    /// type is known to inference at the destination.
    fn coerce(&self, text: &str, ety: &ETy, target: &CType) -> Result<String, TranslateError> {
        match ety {
            ETy::Bool => {
                if self.scalar_of(target).is_some() {
                    let as_int = format!("(({text}) as i32)");
                    if self.same_rust(&CType::int(), target) {
                        Ok(as_int)
                    } else {
                        Ok(format!("({as_int}).cast()"))
                    }
                } else {
                    Err(oos("boolean where non-scalar expected"))
                }
            }
            ETy::Val(src) => {
                if self.is_ptr(target) || target.func_ptr.is_some() {
                    if is_zero_literal(text) && self.scalar_of(src).is_some() {
                        if target.func_ptr.is_some() {
                            return Ok("FuncPtr::null()".to_string());
                        }
                        return Ok("Ptr::null()".to_string());
                    }
                    if self.is_array(src) {
                        return Ok(format!("({text}).cast()"));
                    }
                    if self.is_ptr(src) {
                        if self.same_rust(src, target) {
                            return Ok(format!("({text}).clone()"));
                        }
                        return Ok(format!("({text}).clone().cast()"));
                    }
                    return Err(oos("integer-to-pointer conversion"));
                }
                if self.same_rust(src, target) {
                    if self.is_ptr(src) {
                        return Ok(format!("({text}).clone()"));
                    }
                    return Ok(text.to_string());
                }
                match (self.scalar_of(src), self.scalar_of(target)) {
                    (Some(_), Some(_)) => {
                        if is_plain_literal(text) && !text.starts_with('-') {
                            Ok(text.to_string())
                        } else {
                            Ok(format!("({text}).cast()"))
                        }
                    }
                    _ => Err(oos(format!(
                        "conversion from {} to {}",
                        src.to_c_string(""),
                        target.to_c_string("")
                    ))),
                }
            }
        }
    }

    /// Typed conversion into a computed common type (binary operands).
    fn coerce_typed(
        &self,
        text: &str,
        src: &CType,
        common: &CType,
    ) -> Result<String, TranslateError> {
        if self.same_rust(src, common) {
            return Ok(text.to_string());
        }
        if is_plain_literal(text) && !text.starts_with('-') {
            return Ok(text.to_string());
        }
        Ok(format!("({text}).cast::<{}>()", self.rust_of(common)?))
    }

    // ---- expressions ----

    pub fn emit_expr(&mut self, e: &CExpr) -> Result<(String, ETy), TranslateError> {
        match e {
            CExpr::Int { text, ty } => Ok((text.clone(), ETy::Val(ty.clone()))),
            CExpr::Str(raw) => {
                let mut t = CType::scalar(BaseType::Char { signed: None });
                t.pointer_depth = 1;
                Ok((format!("cstr!({raw})"), ETy::Val(t)))
            }
            CExpr::Char(b) => Ok((format!("{b}"), ETy::Val(CType::int()))),
            CExpr::Ident(name) => self.emit_ident(name),
            CExpr::Call(name, args) => self.emit_call(name, args),
            CExpr::Index(base, idx) => {
                let (bt, bty) = self.emit_expr(base)?;
                let src = self.val_type(&bty)?;
                let elem = self.elem_of(&src)?;
                let it = self.emit_raw_int(idx)?;
                Ok((format!("{bt}.idx({it})"), ETy::Val(elem)))
            }
            CExpr::Deref(inner) => {
                let (t, ty) = self.emit_expr(inner)?;
                let src = self.val_type(&ty)?;
                let elem = self.elem_of(&src)?;
                if self.is_array(&src) {
                    Ok((format!("{t}.idx(0)"), ETy::Val(elem)))
                } else {
                    Ok((format!("{t}.get()"), ETy::Val(elem)))
                }
            }
            CExpr::AddrOf(inner) => self.emit_addr_of(inner),
            CExpr::Unary(op, inner) => self.emit_unary(*op, inner),
            CExpr::Binary(op, l, r) => self.emit_binary(*op, l, r),
            CExpr::Cast(target, inner) => self.emit_cast(target, inner),
            CExpr::SizeofType(ty) => {
                if self.scalar_of(ty).is_none() && !self.is_ptr(ty) {
                    return Err(oos("sizeof on aggregate type"));
                }
                let size_t = CType::scalar(BaseType::Alias("size_t".to_string()));
                Ok((
                    format!("c_sizeof!({})", self.rust_of(ty)?),
                    ETy::Val(size_t),
                ))
            }
            CExpr::SizeofExpr(inner) => {
                let (t, _) = self.emit_expr(inner)?;
                let size_t = CType::scalar(BaseType::Alias("size_t".to_string()));
                Ok((format!("c_sizeofval!({t})"), ETy::Val(size_t)))
            }
            CExpr::Step { .. } => Err(oos("increment/decrement inside an expression")),
        }
    }

    fn val_type(&self, ety: &ETy) -> Result<CType, TranslateError> {
        match ety {
            ETy::Val(t) => Ok(t.clone()),
            ETy::Bool => Ok(CType::int()),
        }
    }

    fn emit_ident(&mut self, name: &str) -> Result<(String, ETy), TranslateError> {
        let n = sanitize_ident(name);
        if let Some(ty) = self.lookup_local(name).cloned() {
            if self.cells.contains(name) {
                return Ok((format!("{n}.get()"), ETy::Val(ty)));
            }
            return Ok((n, ETy::Val(ty)));
        }
        if self.lookup_enum_const(name) {
            return Ok((n, ETy::Val(CType::int())));
        }
        if let Some(ty) = self.lookup_obj_macro(name) {
            return Ok((n, ETy::Val(ty)));
        }
        if let Some(ty) = self.lookup_global(name).cloned() {
            return Ok((format!("{n}.get()"), ETy::Val(ty)));
        }
        Err(oos(format!("unknown identifier {name}")))
    }

    fn emit_addr_of(&mut self, inner: &CExpr) -> Result<(String, ETy), TranslateError> {
        match inner {
            CExpr::Ident(name) => {
                let n = sanitize_ident(name);
                if let Some(ty) = self.lookup_local(name).cloned() {
                    if self.cells.contains(name) {
                        let mut pt = ty.clone();
                        pt.pointer_depth += 1;
                        return Ok((format!("{n}.clone()"), ETy::Val(pt)));
                    }
                    if self.is_array(&ty) {
                        let elem = self.elem_of(&ty)?;
                        let mut pt = elem;
                        pt.pointer_depth += 1;
                        return Ok((format!("{n}.as_ptr()"), ETy::Val(pt)));
                    }
                    return Err(oos(format!("address of non-cell local {name}")));
                }
                Err(oos(format!("address of {name}")))
            }
            CExpr::Index(base, idx) => {
                let (bt, bty) = self.emit_expr(base)?;
                let src = self.val_type(&bty)?;
                let elem = self.elem_of(&src)?;
                let ptr_text = if self.is_array(&src) {
                    format!("{bt}.as_ptr()")
                } else {
                    format!("{bt}.clone()")
                };
                let it = self.emit_raw_int(idx)?;
                let mut pt = elem;
                pt.pointer_depth += 1;
                Ok((format!("({ptr_text} + ({it}))"), ETy::Val(pt)))
            }
            CExpr::Deref(p) => self.emit_expr(p),
            _ => Err(oos("address-of on this expression")),
        }
    }

    fn emit_unary(&mut self, op: UnOp, inner: &CExpr) -> Result<(String, ETy), TranslateError> {
        match op {
            UnOp::Not => {
                let c = self.emit_cond(inner)?;
                Ok((format!("!({c})"), ETy::Bool))
            }
            UnOp::Neg => {
                let (t, ty) = self.emit_expr(inner)?;
                let src = self.val_type(&ty)?;
                let common = self.promote(&src);
                match self.scalar_of(&common) {
                    Some(Scalar::Int { unsigned: true, .. }) => {
                        let ct = self.coerce_typed(&t, &src, &common)?;
                        Ok((format!("({ct}).wrapping_neg()"), ETy::Val(common)))
                    }
                    Some(_) => {
                        let ct = self.coerce_typed(&t, &src, &common)?;
                        Ok((format!("-({ct})"), ETy::Val(common)))
                    }
                    None => Err(oos("negation of non-scalar")),
                }
            }
            UnOp::BitNot => {
                let (t, ty) = self.emit_expr(inner)?;
                let src = self.val_type(&ty)?;
                let common = self.promote(&src);
                let ct = self.coerce_typed(&t, &src, &common)?;
                Ok((format!("!({ct})"), ETy::Val(common)))
            }
        }
    }

    fn emit_binary(
        &mut self,
        op: BinOp,
        l: &CExpr,
        r: &CExpr,
    ) -> Result<(String, ETy), TranslateError> {
        if op.is_logical() {
            let lc = self.emit_cond(l)?;
            let rc = self.emit_cond(r)?;
            return Ok((format!("({lc} {} {rc})", op.text()), ETy::Bool));
        }

        let (lt, lety) = self.emit_expr(l)?;
        let (rt, rety) = self.emit_expr(r)?;
        let lty = self.val_type(&lety)?;
        let rty = self.val_type(&rety)?;
        let l_ptr = self.is_ptr(&lty) || self.is_array(&lty);
        let r_ptr = self.is_ptr(&rty) || self.is_array(&rty);

        if op.is_comparison() {
            if l_ptr && is_zero_literal(&rt) {
                let test = if op == BinOp::Eq { "" } else { "!" };
                return Ok((format!("{test}({lt}).is_null()"), ETy::Bool));
            }
            if r_ptr && is_zero_literal(&lt) {
                let test = if op == BinOp::Eq { "" } else { "!" };
                return Ok((format!("{test}({rt}).is_null()"), ETy::Bool));
            }
            if l_ptr && r_ptr {
                return Ok((format!("(({lt}) {} ({rt}))", op.text()), ETy::Bool));
            }
            let (lv, rv) = (self.as_val(&lt, &lety)?, self.as_val(&rt, &rety)?);
            let common = self.usual_arith(&lv.1, &rv.1)?;
            let a = self.coerce_typed(&lv.0, &lv.1, &common)?;
            let b = self.coerce_typed(&rv.0, &rv.1, &common)?;
            return Ok((format!("({a} {} {b})", op.text()), ETy::Bool));
        }

        // Pointer arithmetic.
        if l_ptr && matches!(op, BinOp::Add | BinOp::Sub) {
            if r_ptr && op == BinOp::Sub {
                let d = CType::scalar(BaseType::Alias("ptrdiff_t".to_string()));
                let lp = self.as_owned_ptr(&lt, &lty);
                let rp = self.as_owned_ptr(&rt, &rty);
                return Ok((format!("({lp} - {rp})"), ETy::Val(d)));
            }
            let it = self.emit_raw_int_text(&rt, &rety)?;
            let lp = self.as_owned_ptr(&lt, &lty);
            let sign = if op == BinOp::Add { "+" } else { "-" };
            let mut ty = lty.clone();
            if self.is_array(&lty) {
                ty = self.elem_of(&lty)?;
                ty.pointer_depth += 1;
            }
            return Ok((format!("({lp} {sign} ({it}))"), ETy::Val(ty)));
        }
        if r_ptr && op == BinOp::Add {
            let it = self.emit_raw_int_text(&lt, &lety)?;
            let rp = self.as_owned_ptr(&rt, &rty);
            let mut ty = rty.clone();
            if self.is_array(&rty) {
                ty = self.elem_of(&rty)?;
                ty.pointer_depth += 1;
            }
            return Ok((format!("({rp} + ({it}))"), ETy::Val(ty)));
        }

        let (lv, rv) = (self.as_val(&lt, &lety)?, self.as_val(&rt, &rety)?);
        if matches!(op, BinOp::Shl | BinOp::Shr) {
            let common = self.promote(&lv.1);
            let a = self.coerce_typed(&lv.0, &lv.1, &common)?;
            return Ok((format!("({a} {} {})", op.text(), rv.0), ETy::Val(common)));
        }
        let common = self.usual_arith(&lv.1, &rv.1)?;
        let a = self.coerce_typed(&lv.0, &lv.1, &common)?;
        let b = self.coerce_typed(&rv.0, &rv.1, &common)?;
        Ok((format!("({a} {} {b})", op.text()), ETy::Val(common)))
    }

    fn as_val(&self, text: &str, ety: &ETy) -> Result<(String, CType), TranslateError> {
        match ety {
            ETy::Bool => Ok((format!("(({text}) as i32)"), CType::int())),
            ETy::Val(t) => Ok((text.to_string(), t.clone())),
        }
    }

    /// Owned pointer-valued text (cloning handles, decaying arrays).
    fn as_owned_ptr(&self, text: &str, ty: &CType) -> String {
        if self.is_array(ty) {
            format!("{text}.as_ptr()")
        } else {
            format!("({text}).clone()")
        }
    }

    fn emit_cast(
        &mut self,
        target: &CType,
        inner: &CExpr,
    ) -> Result<(String, ETy), TranslateError> {
        let (t, ety) = self.emit_expr(inner)?;
        let src = self.val_type(&ety)?;
        if target.is_void() {
            return Ok((t, ETy::Val(src)));
        }
        if self.is_ptr(target) {
            if self.is_array(&src) {
                return Ok((
                    format!("({t}).cast::<{}>()", self.rust_of(target)?),
                    ETy::Val(target.clone()),
                ));
            }
            if self.is_ptr(&src) {
                return Ok((
                    format!("({t}).clone().cast::<{}>()", self.rust_of(target)?),
                    ETy::Val(target.clone()),
                ));
            }
            if is_zero_literal(&t) {
                return Ok(("Ptr::null()".to_string(), ETy::Val(target.clone())));
            }
            return Err(oos("integer-to-pointer cast"));
        }
        if self.scalar_of(target).is_some() {
            let (vt, vty) = self.as_val(&t, &ety)?;
            if self.is_ptr(&vty) {
                // pointer-to-integer is allowed
                return Ok((
                    format!("({vt}).clone().cast::<{}>()", self.rust_of(target)?),
                    ETy::Val(target.clone()),
                ));
            }
            return Ok((
                format!("({vt}).cast::<{}>()", self.rust_of(target)?),
                ETy::Val(target.clone()),
            ));
        }
        Err(oos("cast to unsupported type"))
    }

    fn emit_cond(&mut self, e: &CExpr) -> Result<String, TranslateError> {
        let (t, ety) = self.emit_expr(e)?;
        match &ety {
            ETy::Bool => Ok(t),
            ETy::Val(ty) => {
                if self.is_ptr(ty) {
                    Ok(format!("!({t}).is_null()"))
                } else if self.scalar_of(ty).is_some() {
                    Ok(format!("({t}) != 0"))
                } else {
                    Err(oos("condition on non-scalar"))
                }
            }
        }
    }

    /// Integer-valued raw text for subscript/shift/size positions.
    fn emit_raw_int(&mut self, e: &CExpr) -> Result<String, TranslateError> {
        let (t, ety) = self.emit_expr(e)?;
        self.emit_raw_int_text(&t, &ety)
    }

    fn emit_raw_int_text(&self, text: &str, ety: &ETy) -> Result<String, TranslateError> {
        match ety {
            ETy::Bool => Ok(format!("(({text}) as i32)")),
            ETy::Val(t) if self.scalar_of(t).is_some() => Ok(text.to_string()),
            _ => Err(oos("non-integer where an integer is required")),
        }
    }

    fn emit_call(
        &mut self,
        name: &str,
        args: &[CExpr],
    ) -> Result<(String, ETy), TranslateError> {
        // Project entities shadow libc names.
        if let Some(sig) = self.lookup_fn(name).cloned() {
            if args.len() < sig.params.len() || (!sig.is_variadic && args.len() > sig.params.len())
            {
                return Err(oos(format!("arity mismatch calling {name}")));
            }
            let mut parts = Vec::new();
            for (arg, (_, pty)) in args.iter().zip(&sig.params) {
                let (t, ety) = self.emit_expr(arg)?;
                parts.push(self.coerce(&t, &ety, pty)?);
            }
            if sig.is_variadic {
                let extra = &args[sig.params.len()..];
                let mut binds = String::new();
                let mut refs = Vec::new();
                for a in extra {
                    let (t, _) = self.emit_expr(a)?;
                    let tmp = self.fresh("va");
                    binds.push_str(&format!("let {tmp} = {t}; "));
                    refs.push(format!("&{tmp}"));
                }
                let call = format!(
                    "{}({}{})",
                    sanitize_ident(&sig.name),
                    parts.join(", "),
                    if parts.is_empty() {
                        format!("__va_list")
                    } else {
                        format!(", __va_list")
                    }
                );
                let text = format!(
                    "{{ {binds}let __va_list: VaList = &[{}]; {call} }}",
                    refs.join(", ")
                );
                return Ok((text, ETy::Val(sig.return_type.clone())));
            }
            return Ok((
                format!("{}({})", sanitize_ident(&sig.name), parts.join(", ")),
                ETy::Val(sig.return_type.clone()),
            ));
        }
        if self.lookup_fn_macro(name) {
            let mut parts = Vec::new();
            for a in args {
                let (t, ety) = self.emit_expr(a)?;
                parts.push(self.as_val(&t, &ety)?.0);
            }
            return Ok((
                format!("{}!({})", sanitize_ident(name), parts.join(", ")),
                ETy::Val(CType::int()),
            ));
        }
        if LIBC_FNS.contains(&name) {
            return self.emit_libc_call(name, args);
        }
        Err(oos(format!("call to unknown function {name}")))
    }

    fn emit_libc_call(
        &mut self,
        name: &str,
        args: &[CExpr],
    ) -> Result<(String, ETy), TranslateError> {
        let char_ptr = || {
            let mut t = CType::scalar(BaseType::Char { signed: None });
            t.pointer_depth = 1;
            t
        };
        let size_t = || CType::scalar(BaseType::Alias("size_t".to_string()));
        let arg_ptr = |me: &mut Self, e: &CExpr| -> Result<(String, CType), TranslateError> {
            let (t, ety) = me.emit_expr(e)?;
            let ty = me.val_type(&ety)?;
            if me.is_array(&ty) {
                Ok((format!("{t}.as_ptr()"), ty))
            } else if me.is_ptr(&ty) {
                Ok((format!("({t}).clone()"), ty))
            } else {
                Err(oos(format!("{name} expects a pointer argument")))
            }
        };
        let arg_int = |me: &mut Self, e: &CExpr| -> Result<String, TranslateError> {
            me.emit_raw_int(e)
        };
        match (name, args) {
            ("malloc", [n]) => {
                let nt = arg_int(self, n)?;
                Ok((format!("c_malloc!({nt})"), ETy::Val(char_ptr())))
            }
            ("free", [p]) => {
                let (pt, _) = arg_ptr(self, p)?;
                Ok((format!("c_free!({pt})"), ETy::Val(CType::void())))
            }
            ("memcpy", [d, s, n]) | ("memmove", [d, s, n]) => {
                let (dt, dty) = arg_ptr(self, d)?;
                let (st, _) = arg_ptr(self, s)?;
                let nt = arg_int(self, n)?;
                let mac = if name == "memcpy" { "c_memcpy" } else { "c_memmove" };
                Ok((format!("{mac}!({dt}, {st}, {nt})"), ETy::Val(dty)))
            }
            ("memset", [d, v, n]) => {
                let (dt, dty) = arg_ptr(self, d)?;
                let vt = arg_int(self, v)?;
                let nt = arg_int(self, n)?;
                Ok((format!("c_memset!({dt}, {vt}, {nt})"), ETy::Val(dty)))
            }
            ("strlen", [s]) => {
                let (st, _) = arg_ptr(self, s)?;
                Ok((format!("c_strlen!({st})"), ETy::Val(size_t())))
            }
            ("strcmp", [a, b]) => {
                let (at, _) = arg_ptr(self, a)?;
                let (bt, _) = arg_ptr(self, b)?;
                Ok((format!("c_strcmp!({at}, {bt})"), ETy::Val(CType::int())))
            }
            ("printf", [fmt, rest @ ..]) => {
                let (ft, _) = self.emit_expr(fmt)?;
                let mut parts = vec![ft];
                for a in rest {
                    parts.push(self.emit_expr(a)?.0);
                }
                Ok((
                    format!("c_printf!({})", parts.join(", ")),
                    ETy::Val(CType::int()),
                ))
            }
            ("snprintf", [buf, size, fmt, rest @ ..]) => {
                let (bt, _) = arg_ptr(self, buf)?;
                let st = arg_int(self, size)?;
                let (ft, _) = self.emit_expr(fmt)?;
                let mut parts = vec![bt, st, ft];
                for a in rest {
                    parts.push(self.emit_expr(a)?.0);
                }
                Ok((
                    format!("c_snprintf!({})", parts.join(", ")),
                    ETy::Val(CType::int()),
                ))
            }
            ("fopen", [p, m]) => {
                let (pt, _) = self.emit_expr(p)?;
                let (mt, _) = self.emit_expr(m)?;
                let mut t = CType::scalar(BaseType::Alias("FILE".to_string()));
                t.pointer_depth = 1;
                Ok((format!("c_fopen!({pt}, {mt})"), ETy::Val(t)))
            }
            ("fclose", [f]) => {
                let (ft, _) = self.emit_expr(f)?;
                Ok((format!("c_fclose!({ft})"), ETy::Val(CType::int())))
            }
            ("fread", [b, s, n, f]) | ("fwrite", [b, s, n, f]) => {
                let (bt, _) = arg_ptr(self, b)?;
                let st = arg_int(self, s)?;
                let nt = arg_int(self, n)?;
                let (ft, _) = self.emit_expr(f)?;
                let mac = if name == "fread" { "c_fread" } else { "c_fwrite" };
                Ok((
                    format!("{mac}!({bt}, {st}, {nt}, {ft})"),
                    ETy::Val(size_t()),
                ))
            }
            _ => Err(oos(format!("libc call {name} with this arity"))),
        }
    }

    // ---- statements ----

    fn emit_block(
        &mut self,
        stmts: &[CStmt],
        depth: usize,
        addr_taken: &BTreeSet<String>,
    ) -> Result<String, TranslateError> {
        self.scopes.push(BTreeMap::new());
        let mut out = String::new();
        for s in stmts {
            out.push_str(&self.emit_stmt(s, depth, addr_taken)?);
        }
        self.scopes.pop();
        Ok(out)
    }

    fn emit_stmt(
        &mut self,
        stmt: &CStmt,
        depth: usize,
        addr_taken: &BTreeSet<String>,
    ) -> Result<String, TranslateError> {
        let pad = "    ".repeat(depth);
        match stmt {
            CStmt::Block(inner) => {
                if inner.is_empty() {
                    return Ok(String::new());
                }
                let body = self.emit_block(inner, depth + 1, addr_taken)?;
                Ok(format!("{pad}{{\n{body}{pad}}}\n"))
            }
            CStmt::Decl { name, ty, init } => {
                self.scopes
                    .last_mut()
                    .expect("scope")
                    .insert(name.clone(), ty.clone());
                let n = sanitize_ident(name);
                let rust = self.rust_of(ty)?;
                if addr_taken.contains(name) && !self.is_array(ty) {
                    self.cells.insert(name.clone());
                    let init_text = match init {
                        Some(e) => {
                            let (t, ety) = self.emit_expr(e)?;
                            self.coerce(&t, &ety, ty)?
                        }
                        None => self.zero_of(ty)?,
                    };
                    return Ok(format!(
                        "{pad}let {n}: Ptr<{rust}> = Ptr::alloc_one({init_text});\n"
                    ));
                }
                let init_text = match init {
                    Some(CExpr::Call(list_name, _)) if list_name == "\u{0}" => unreachable!(),
                    Some(e) => self.emit_init(e, ty)?,
                    None => self.zero_of(ty)?,
                };
                Ok(format!("{pad}let mut {n}: {rust} = {init_text};\n"))
            }
            CStmt::Expr(e) => self.emit_expr_stmt(e, &pad),
            CStmt::Assign { target, op, value } => self.emit_assign(target, *op, value, &pad),
            CStmt::If { cond, then, els } => {
                let c = self.emit_cond(cond)?;
                let tb = self.emit_block(then, depth + 1, addr_taken)?;
                let mut out = format!("{pad}if {c} {{\n{tb}{pad}}}");
                if let Some(eb) = els {
                    let et = self.emit_block(eb, depth + 1, addr_taken)?;
                    out.push_str(&format!(" else {{\n{et}{pad}}}"));
                }
                out.push('\n');
                Ok(out)
            }
            CStmt::While { cond, body } => {
                let c = self.emit_cond(cond)?;
                let b = self.emit_block(body, depth + 1, addr_taken)?;
                Ok(format!("{pad}while {c} {{\n{b}{pad}}}\n"))
            }
            CStmt::DoWhile { body, cond } => {
                let b = self.emit_block(body, depth + 1, addr_taken)?;
                let c = self.emit_cond(cond)?;
                Ok(format!("{pad}c_do!({{\n{b}{pad}}} while {c});\n"))
            }
            CStmt::For {
                init,
                cond,
                step,
                body,
            } => {
                self.scopes.push(BTreeMap::new());
                let init_text = match init {
                    Some(s) => Some(self.emit_simple_as_fragment(s, addr_taken)?),
                    None => None,
                };
                let cond_text = match cond {
                    Some(c) => self.emit_cond(c)?,
                    None => "true".to_string(),
                };
                let step_text = match step {
                    Some(s) => self.emit_simple_as_expr(s)?,
                    None => "()".to_string(),
                };
                let b = self.emit_block(body, depth + 1, addr_taken)?;
                self.scopes.pop();
                match init_text {
                    Some(i) => Ok(format!(
                        "{pad}c_for!({i}; {cond_text}; {step_text} => {{\n{b}{pad}}});\n"
                    )),
                    None => Ok(format!(
                        "{pad}c_for!(; {cond_text}; {step_text} => {{\n{b}{pad}}});\n"
                    )),
                }
            }
            CStmt::Switch { sel, cases, default } => {
                let (st, sety) = self.emit_expr(sel)?;
                let sty = self.val_type(&sety)?;
                let mut out = format!("{pad}c_switch!({st};\n");
                for case in cases {
                    out.push_str(&self.emit_case(case, &sty, depth + 1, addr_taken)?);
                }
                if let Some(d) = default {
                    let b = self.emit_block(d, depth + 2, addr_taken)?;
                    out.push_str(&format!(
                        "{pad}    default => {{\n{b}{pad}    }};\n"
                    ));
                }
                out.push_str(&format!("{pad});\n"));
                Ok(out)
            }
            CStmt::Return(value) => match value {
                Some(e) => {
                    let (t, ety) = self.emit_expr(e)?;
                    let ret = self.ret.clone();
                    let v = self.coerce(&t, &ety, &ret)?;
                    Ok(format!("{pad}return {v};\n"))
                }
                None => Ok(format!("{pad}return;\n")),
            },
            CStmt::Break => Ok(format!("{pad}break;\n")),
            CStmt::Continue => Ok(format!("{pad}continue;\n")),
        }
    }

    fn emit_case(
        &mut self,
        case: &SwitchCase,
        sel_ty: &CType,
        depth: usize,
        addr_taken: &BTreeSet<String>,
    ) -> Result<String, TranslateError> {
        let pad = "    ".repeat(depth);
        let mut values = Vec::new();
        for v in &case.values {
            let (t, ety) = self.emit_expr(v)?;
            let src = self.val_type(&ety)?;
            values.push(self.coerce_typed(&t, &src, sel_ty)?);
        }
        let b = self.emit_block(&case.body, depth + 1, addr_taken)?;
        let marker = if case.has_break { " break" } else { "" };
        Ok(format!(
            "{pad}case {} => {{\n{b}{pad}}}{marker};\n",
            values.join(", ")
        ))
    }

    fn emit_init(&mut self, e: &CExpr, target: &CType) -> Result<String, TranslateError> {
        if self.is_array(target) {
            return Err(oos("array initializer in locals"));
        }
        let (t, ety) = self.emit_expr(e)?;
        self.coerce(&t, &ety, target)
    }

    fn zero_of(&self, ty: &CType) -> Result<String, TranslateError> {
        if self.is_array(ty) {
            return Ok("Array::zeroed()".to_string());
        }
        if self.is_ptr(ty) {
            return Ok("Ptr::null()".to_string());
        }
        if ty.base == BaseType::Alias("FILE".to_string()) {
            return Ok("FilePtr::null()".to_string());
        }
        match self.scalar_of(ty) {
            Some(Scalar::Float { .. }) => Ok("0.0".to_string()),
            Some(Scalar::Int { .. }) => Ok("0".to_string()),
            None => Err(oos("local of unsupported type")),
        }
    }

    fn emit_expr_stmt(&mut self, e: &CExpr, pad: &str) -> Result<String, TranslateError> {
        if let CExpr::Step { inc, target, .. } = e {
            return self.emit_step_stmt(target, *inc, pad);
        }
        let (t, _) = self.emit_expr(e)?;
        Ok(format!("{pad}{t};\n"))
    }

    fn emit_step_stmt(
        &mut self,
        target: &CExpr,
        inc: bool,
        pad: &str,
    ) -> Result<String, TranslateError> {
        Ok(format!("{pad}{};\n", self.step_expr(target, inc)?))
    }

    /// `x++` / `x--` as an expression whose value is discarded.
    fn step_expr(&mut self, target: &CExpr, inc: bool) -> Result<String, TranslateError> {
        match target {
            CExpr::Ident(name) => {
                let n = sanitize_ident(name);
                if let Some(ty) = self.lookup_local(name).cloned() {
                    if self.cells.contains(name) {
                        let op = if inc { "+" } else { "-" };
                        return Ok(format!("{n}.set({n}.get() {op} 1)"));
                    }
                    let f = if inc { "post_inc" } else { "post_dec" };
                    let _ = ty;
                    return Ok(format!("{f}(&mut {n})"));
                }
                if self.lookup_global(name).is_some() {
                    let op = if inc { "+" } else { "-" };
                    return Ok(format!("{n}.set({n}.get() {op} 1)"));
                }
                Err(oos(format!("increment of unknown identifier {name}")))
            }
            CExpr::Deref(p) => {
                let (pt, _) = self.emit_expr(p)?;
                let tmp = self.fresh("p");
                let op = if inc { "+" } else { "-" };
                Ok(format!(
                    "{{ let {tmp} = ({pt}).clone(); {tmp}.set({tmp}.get() {op} 1); }}"
                ))
            }
            _ => Err(oos("increment target")),
        }
    }

    fn emit_assign(
        &mut self,
        target: &CExpr,
        op: Option<BinOp>,
        value: &CExpr,
        pad: &str,
    ) -> Result<String, TranslateError> {
        match target {
            CExpr::Ident(name) => {
                let n = sanitize_ident(name);
                if let Some(ty) = self.lookup_local(name).cloned() {
                    let rhs = self.assign_rhs(target, op, value, &ty)?;
                    if self.cells.contains(name) {
                        return Ok(format!("{pad}{n}.set({rhs});\n"));
                    }
                    return Ok(format!("{pad}{n} = {rhs};\n"));
                }
                if let Some(ty) = self.lookup_global(name).cloned() {
                    let rhs = self.assign_rhs(target, op, value, &ty)?;
                    return Ok(format!("{pad}{n}.set({rhs});\n"));
                }
                Err(oos(format!("assignment to unknown identifier {name}")))
            }
            CExpr::Deref(p) => {
                let (pt, pety) = self.emit_expr(p)?;
                let pty = self.val_type(&pety)?;
                let elem = self.elem_of(&pty)?;
                let tmp = self.fresh("p");
                let rhs = match op {
                    None => {
                        let (vt, vety) = self.emit_expr(value)?;
                        self.coerce(&vt, &vety, &elem)?
                    }
                    Some(op) => {
                        let read = format!("{tmp}.get()");
                        self.compound_rhs(&read, &elem, op, value)?
                    }
                };
                Ok(format!(
                    "{pad}{{ let {tmp} = ({pt}).clone(); {tmp}.set({rhs}); }}\n"
                ))
            }
            CExpr::Index(base, idx) => {
                let (bt, bety) = self.emit_expr(base)?;
                let bty = self.val_type(&bety)?;
                let elem = self.elem_of(&bty)?;
                let it = self.emit_raw_int(idx)?;
                let btmp = self.fresh("b");
                let itmp = self.fresh("i");
                let owned = self.as_owned_ptr(&bt, &bty);
                let rhs = match op {
                    None => {
                        let (vt, vety) = self.emit_expr(value)?;
                        self.coerce(&vt, &vety, &elem)?
                    }
                    Some(op) => {
                        let read = format!("{btmp}.idx({itmp})");
                        self.compound_rhs(&read, &elem, op, value)?
                    }
                };
                Ok(format!(
                    "{pad}{{ let {btmp} = {owned}; let {itmp} = {it}; {btmp}.set_idx({itmp}, {rhs}); }}\n"
                ))
            }
            _ => Err(oos("assignment target")),
        }
    }

    /// Right-hand side for `target op= value` / `target = value`.
    fn assign_rhs(
        &mut self,
        target: &CExpr,
        op: Option<BinOp>,
        value: &CExpr,
        target_ty: &CType,
    ) -> Result<String, TranslateError> {
        match op {
            None => {
                let (vt, vety) = self.emit_expr(value)?;
                self.coerce(&vt, &vety, target_ty)
            }
            Some(op) => {
                let desugared = CExpr::Binary(
                    op,
                    Box::new(target.clone()),
                    Box::new(value.clone()),
                );
                let (vt, vety) = self.emit_expr(&desugared)?;
                self.coerce(&vt, &vety, target_ty)
            }
        }
    }

    /// Compound RHS where the read side is a pre-evaluated temp (`read`).
    fn compound_rhs(
        &mut self,
        read: &str,
        elem: &CType,
        op: BinOp,
        value: &CExpr,
    ) -> Result<String, TranslateError> {
        let (vt, vety) = self.emit_expr(value)?;
        let vty = self.val_type(&vety)?;
        if self.is_ptr(elem) {
            return Err(oos("compound assignment to pointer element"));
        }
        let common = self.usual_arith(elem, &vty)?;
        let a = self.coerce_typed(read, elem, &common)?;
        let b = self.coerce_typed(&vt, &vty, &common)?;
        let combined = format!("({a} {} {b})", op.text());
        self.coerce(&combined, &ETy::Val(common), elem)
    }

    /// A `for` clause rendered as a statement fragment without `;`.
    fn emit_simple_as_fragment(
        &mut self,
        stmt: &CStmt,
        addr_taken: &BTreeSet<String>,
    ) -> Result<String, TranslateError> {
        match stmt {
            CStmt::Decl { name, ty, init } => {
                self.scopes
                    .last_mut()
                    .expect("scope")
                    .insert(name.clone(), ty.clone());
                if addr_taken.contains(name) {
                    return Err(oos("address of a for-loop variable"));
                }
                let n = sanitize_ident(name);
                let rust = self.rust_of(ty)?;
                let init_text = match init {
                    Some(e) => self.emit_init(e, ty)?,
                    None => self.zero_of(ty)?,
                };
                Ok(format!("let mut {n}: {rust} = {init_text}"))
            }
            CStmt::Assign { .. } | CStmt::Expr(_) => {
                let text = self.emit_simple_as_expr(stmt)?;
                Ok(text)
            }
            _ => Err(oos("for-loop clause")),
        }
    }

    /// A `for` step clause rendered as an expression.
    fn emit_simple_as_expr(&mut self, stmt: &CStmt) -> Result<String, TranslateError> {
        match stmt {
            CStmt::Expr(CExpr::Step { inc, target, .. }) => self.step_expr(target, *inc),
            CStmt::Expr(e) => Ok(self.emit_expr(e)?.0),
            CStmt::Assign { target, op, value } => match target {
                CExpr::Ident(name) => {
                    let n = sanitize_ident(name);
                    if let Some(ty) = self.lookup_local(name).cloned() {
                        let rhs = self.assign_rhs(target, *op, value, &ty)?;
                        if self.cells.contains(name) {
                            return Ok(format!("{n}.set({rhs})"));
                        }
                        return Ok(format!("{n} = {rhs}"));
                    }
                    if let Some(ty) = self.lookup_global(name).cloned() {
                        let rhs = self.assign_rhs(target, *op, value, &ty)?;
                        return Ok(format!("{n}.set({rhs})"));
                    }
                    Err(oos(format!("assignment to unknown identifier {name}")))
                }
                _ => Err(oos("for-step assignment target")),
            },
            _ => Err(oos("for-step clause")),
        }
    }
}

fn is_zero_literal(text: &str) -> bool {
    matches!(text.trim(), "0" | "0x0" | "0u" | "0U" | "0L" | "0l")
}

fn is_plain_literal(text: &str) -> bool {
    let t = text.trim();
    let t = t.strip_prefix('-').unwrap_or(t);
    !t.is_empty()
        && (t.chars().all(|c| c.is_ascii_digit())
            || (t.starts_with("0x") && t[2..].chars().all(|c| c.is_ascii_hexdigit())))
}

/// Locals (and parameters) whose address is taken via `&x`.
pub fn collect_addr_taken(stmts: &[CStmt]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fn walk_expr(e: &CExpr, out: &mut BTreeSet<String>) {
        match e {
            CExpr::AddrOf(inner) => {
                if let CExpr::Ident(n) = inner.as_ref() {
                    out.insert(n.clone());
                }
                walk_expr(inner, out);
            }
            CExpr::Call(_, args) => args.iter().for_each(|a| walk_expr(a, out)),
            CExpr::Index(a, b) | CExpr::Binary(_, a, b) => {
                walk_expr(a, out);
                walk_expr(b, out);
            }
            CExpr::Deref(a)
            | CExpr::Unary(_, a)
            | CExpr::Cast(_, a)
            | CExpr::SizeofExpr(a)
            | CExpr::Step { target: a, .. } => walk_expr(a, out),
            _ => {}
        }
    }
    fn walk(stmts: &[CStmt], out: &mut BTreeSet<String>) {
        for s in stmts {
            match s {
                CStmt::Decl { init, .. } => {
                    if let Some(e) = init {
                        walk_expr(e, out);
                    }
                }
                CStmt::Expr(e) => walk_expr(e, out),
                CStmt::Assign { target, value, .. } => {
                    walk_expr(target, out);
                    walk_expr(value, out);
                }
                CStmt::If { cond, then, els } => {
                    walk_expr(cond, out);
                    walk(then, out);
                    if let Some(e) = els {
                        walk(e, out);
                    }
                }
                CStmt::While { cond, body } => {
                    walk_expr(cond, out);
                    walk(body, out);
                }
                CStmt::DoWhile { body, cond } => {
                    walk(body, out);
                    walk_expr(cond, out);
                }
                CStmt::For {
                    init,
                    cond,
                    step,
                    body,
                } => {
                    if let Some(i) = init {
                        walk(std::slice::from_ref(i), out);
                    }
                    if let Some(c) = cond {
                        walk_expr(c, out);
                    }
                    if let Some(st) = step {
                        walk(std::slice::from_ref(st), out);
                    }
                    walk(body, out);
                }
                CStmt::Switch { sel, cases, default } => {
                    walk_expr(sel, out);
                    for c in cases {
                        c.values.iter().for_each(|v| walk_expr(v, out));
                        walk(&c.body, out);
                    }
                    if let Some(d) = default {
                        walk(d, out);
                    }
                }
                CStmt::Return(Some(e)) => walk_expr(e, out),
                CStmt::Block(inner) => walk(inner, out),
                _ => {}
            }
        }
    }
    walk(stmts, &mut out);
    out
}

/// Identifiers assigned or stepped anywhere in the body (parameters needing
/// a `let mut` rebind).
pub fn collect_mutated(stmts: &[CStmt]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fn walk_expr(e: &CExpr, out: &mut BTreeSet<String>) {
        match e {
            CExpr::Step { target, .. } => {
                if let CExpr::Ident(n) = target.as_ref() {
                    out.insert(n.clone());
                }
                walk_expr(target, out);
            }
            CExpr::Call(_, args) => args.iter().for_each(|a| walk_expr(a, out)),
            CExpr::Index(a, b) | CExpr::Binary(_, a, b) => {
                walk_expr(a, out);
                walk_expr(b, out);
            }
            CExpr::Deref(a)
            | CExpr::AddrOf(a)
            | CExpr::Unary(_, a)
            | CExpr::Cast(_, a)
            | CExpr::SizeofExpr(a) => walk_expr(a, out),
            _ => {}
        }
    }
    fn walk(stmts: &[CStmt], out: &mut BTreeSet<String>) {
        for s in stmts {
            match s {
                CStmt::Assign { target, value, .. } => {
                    if let CExpr::Ident(n) = target {
                        out.insert(n.clone());
                    }
                    walk_expr(target, out);
                    walk_expr(value, out);
                }
                CStmt::Decl { init: Some(e), .. } => walk_expr(e, out),
                CStmt::Expr(e) => walk_expr(e, out),
                CStmt::If { cond, then, els } => {
                    walk_expr(cond, out);
                    walk(then, out);
                    if let Some(e) = els {
                        walk(e, out);
                    }
                }
                CStmt::While { cond, body } => {
                    walk_expr(cond, out);
                    walk(body, out);
                }
                CStmt::DoWhile { body, cond } => {
                    walk(body, out);
                    walk_expr(cond, out);
                }
                CStmt::For {
                    init,
                    cond,
                    step,
                    body,
                } => {
                    if let Some(i) = init {
                        walk(std::slice::from_ref(i), out);
                    }
                    if let Some(c) = cond {
                        walk_expr(c, out);
                    }
                    if let Some(st) = step {
                        walk(std::slice::from_ref(st), out);
                    }
                    walk(body, out);
                }
                CStmt::Switch { sel, cases, default } => {
                    walk_expr(sel, out);
                    for c in cases {
                        walk(&c.body, out);
                    }
                    if let Some(d) = default {
                        walk(d, out);
                    }
                }
                CStmt::Return(Some(e)) => walk_expr(e, out),
                CStmt::Block(inner) => walk(inner, out),
                _ => {}
            }
        }
    }
    walk(stmts, &mut out);
    out
}
