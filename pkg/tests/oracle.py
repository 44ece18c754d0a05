"""Brute-force reference implementation of clump detection.

Deliberately naive and written without the detector's code paths: plain
nested loops over every endpoint pair, literal application of the matching
threshold and exclusion rules, and string keys assembled by hand. Tests
compare the real detector's key set against this, so any shared shortcut
would defeat the point.
"""

from typing import List, Set, Tuple


def _match(a_vars, b_vars, match_types: bool) -> List[Tuple[str, str]]:
    """(name, type-from-a) pairs for same-named variables, sorted by name."""
    b_types = {}
    for name, type_text in b_vars:
        b_types[name] = type_text
    out = []
    for name, type_text in a_vars:
        if name in b_types:
            if match_types and b_types[name] != type_text:
                continue
            out.append((name, type_text))
    out.sort()
    return out


def _key(kind: str, from_ref: str, to_ref: str, variables) -> str:
    parts = ",".join(name + ":" + type_text for name, type_text in variables)
    return kind + "|" + from_ref + "|" + to_ref + "|" + parts


def oracle_keys(bundle, cfg) -> Set[str]:
    """Every occurrence key the rules imply, computed the slow literal way."""
    classes = sorted(bundle.classes.values(), key=lambda c: c.qualified_name)
    keys: Set[str] = set()

    def class_vars(c):
        return [(f.name, f.type) for f in c.fields]

    def method_vars(m):
        return [(p.name, p.type) for p in m.parameters]

    # fields_to_fields: all unordered class pairs. The canonical from side
    # is the lexicographically smaller qualified name; an aux class is never
    # allowed there, and allowed as the to side only with the flag.
    for a in classes:
        for b in classes:
            if not (a.qualified_name < b.qualified_name):
                continue
            if a.is_aux:
                continue
            if b.is_aux and not cfg.include_aux_counterpart:
                continue
            if cfg.scope == "module" and a.module != b.module:
                continue
            matched = _match(class_vars(a), class_vars(b), cfg.match_types)
            if len(matched) >= cfg.min_clump_size:
                keys.add(_key(
                    "fields_to_fields", a.qualified_name, b.qualified_name, matched
                ))

    methods = []
    for c in classes:
        for m in c.methods:
            methods.append((c, m, c.qualified_name + "#" + m.signature))

    # parameters_to_parameters: all unordered method pairs, same or
    # different class; canonical from side is the smaller ref.
    for ca, ma, ref_a in methods:
        for cb, mb, ref_b in methods:
            if not (ref_a < ref_b):
                continue
            if ca.is_aux:
                continue
            if cb.is_aux and not cfg.include_aux_counterpart:
                continue
            if ma.is_override and not cfg.include_overrides:
                continue
            if mb.is_override and not cfg.include_overrides:
                continue
            if cfg.scope == "module" and ca.module != cb.module:
                continue
            matched = _match(method_vars(ma), method_vars(mb), cfg.match_types)
            if len(matched) >= cfg.min_clump_size:
                keys.add(_key("parameters_to_parameters", ref_a, ref_b, matched))

    # parameters_to_fields: every method x class pair; the method is always
    # the from side; the method's own class only with the flag.
    for c, m, ref in methods:
        if c.is_aux:
            continue
        if m.is_override and not cfg.include_overrides:
            continue
        for target in classes:
            if target.is_aux and not cfg.include_aux_counterpart:
                continue
            if (target.qualified_name == c.qualified_name
                    and not cfg.include_own_class_param_field):
                continue
            if cfg.scope == "module" and c.module != target.module:
                continue
            matched = _match(method_vars(m), class_vars(target), cfg.match_types)
            if len(matched) >= cfg.min_clump_size:
                keys.add(_key(
                    "parameters_to_fields", ref, target.qualified_name, matched
                ))

    return keys
