import pytest
from hypothesis import given, strategies as st

from aclens.errors import DuplicateCode, EmptyMask, NotNormalized, UnknownCode
from aclens.masks import (
    ATTRIBUTE_CODES,
    FULL_CONTROL_MASK,
    MODIFY_MASK,
    MODIFY_SET,
    READ_AND_EXECUTE_MASK,
    READ_AND_EXECUTE_SET,
    READ_SET,
    WRITE_SET,
    CoarseLevel,
    attributes_of,
    classify_coarse,
    compress_special,
    mask_of,
    normalize_generic,
    parse_compressed,
)
from aclens.model import (
    GENERIC_ALL_BIT,
    GENERIC_EXECUTE_BIT,
    GENERIC_READ_BIT,
    GENERIC_WRITE_BIT,
    AccessMask,
    InheritFlags,
    PermissionAttribute,
)

A = PermissionAttribute

SPECIAL_FIVE = {A.READ_DATA, A.WRITE_DATA, A.DELETE_CHILD, A.READ_PERMISSIONS, A.CHANGE_PERMISSIONS}

attr_sets = st.frozensets(st.sampled_from(list(A)))
nonempty_attr_sets = st.frozensets(st.sampled_from(list(A)), min_size=1)


def test_all_codes_distinct():
    assert len(set(ATTRIBUTE_CODES.values())) == 14
    assert len(ATTRIBUTE_CODES) == 14


def test_paper_fixed_codes():
    assert ATTRIBUTE_CODES[A.READ_DATA] == "R"
    assert ATTRIBUTE_CODES[A.WRITE_DATA] == "W"
    assert ATTRIBUTE_CODES[A.DELETE_CHILD] == "Dc"
    assert ATTRIBUTE_CODES[A.READ_PERMISSIONS] == "Rp"
    assert ATTRIBUTE_CODES[A.CHANGE_PERMISSIONS] == "Cp"


class TestNormalizeGeneric:
    def test_generic_read(self):
        out = normalize_generic(AccessMask(GENERIC_READ_BIT))
        assert attributes_of(out) == READ_SET
        assert classify_coarse(out) is CoarseLevel.READ

    def test_generic_all_expands_to_everything(self):
        out = normalize_generic(AccessMask(GENERIC_ALL_BIT))
        assert attributes_of(out) == frozenset(A)

    def test_generic_write_and_execute(self):
        assert attributes_of(normalize_generic(AccessMask(GENERIC_WRITE_BIT))) == WRITE_SET
        assert normalize_generic(AccessMask(GENERIC_READ_BIT | GENERIC_EXECUTE_BIT)).bits == READ_AND_EXECUTE_MASK.bits

    @given(attr_sets)
    def test_idempotent_on_normalized(self, attrs):
        m = mask_of(attrs)
        assert normalize_generic(m) == m

    @given(attr_sets, st.sets(st.sampled_from([GENERIC_ALL_BIT, GENERIC_EXECUTE_BIT, GENERIC_WRITE_BIT, GENERIC_READ_BIT])))
    def test_idempotent_and_monotone(self, attrs, generics):
        bits = mask_of(attrs).bits
        for g in generics:
            bits |= g
        once = normalize_generic(AccessMask(bits))
        assert normalize_generic(once) == once
        assert once.is_normalized
        # Monotone: no already-set attribute bit is ever cleared.
        assert once.bits & mask_of(attrs).bits == mask_of(attrs).bits


class TestAttributesOf:
    def test_zero(self):
        assert attributes_of(AccessMask(0)) == frozenset()

    def test_round_trip(self):
        attrs = {A.READ_DATA, A.EXECUTE}
        assert attributes_of(mask_of(attrs)) == attrs

    def test_full_control_is_all_14(self):
        assert attributes_of(FULL_CONTROL_MASK) == frozenset(A)

    def test_rejects_generic(self):
        with pytest.raises(NotNormalized):
            attributes_of(AccessMask(GENERIC_READ_BIT))

    @given(attr_sets)
    def test_mask_of_inverse(self, attrs):
        assert attributes_of(mask_of(attrs)) == attrs
        assert mask_of(attributes_of(mask_of(attrs))) == mask_of(attrs)


class TestClassify:
    def test_full_control_any_flags(self):
        assert classify_coarse(FULL_CONTROL_MASK) is CoarseLevel.FULL_CONTROL
        assert (
            classify_coarse(FULL_CONTROL_MASK, InheritFlags(container_inherit=True))
            is CoarseLevel.FULL_CONTROL
        )

    def test_list_folder_contents_disambiguation(self):
        both = InheritFlags(container_inherit=True, object_inherit=True)
        folders_only = InheritFlags(container_inherit=True)
        assert classify_coarse(READ_AND_EXECUTE_MASK, both) is CoarseLevel.READ_AND_EXECUTE
        assert classify_coarse(READ_AND_EXECUTE_MASK, folders_only) is CoarseLevel.LIST_FOLDER_CONTENTS
        assert classify_coarse(READ_AND_EXECUTE_MASK, None) is CoarseLevel.READ_AND_EXECUTE
        assert classify_coarse(READ_AND_EXECUTE_MASK, InheritFlags()) is CoarseLevel.READ_AND_EXECUTE

    def test_special_five_is_special(self):
        assert classify_coarse(mask_of(SPECIAL_FIVE)) is CoarseLevel.SPECIAL

    def test_modify_is_rx_write_delete(self):
        assert MODIFY_SET == READ_AND_EXECUTE_SET | WRITE_SET | {A.DELETE}
        assert classify_coarse(MODIFY_MASK) is CoarseLevel.MODIFY

    @given(attr_sets)
    def test_non_special_iff_canonical_set(self, attrs):
        canonical = {READ_SET, WRITE_SET, frozenset(READ_AND_EXECUTE_SET), frozenset(MODIFY_SET), frozenset(A)}
        level = classify_coarse(mask_of(attrs))
        assert (level is not CoarseLevel.SPECIAL) == (frozenset(attrs) in canonical)


class TestCompression:
    def test_paper_string(self):
        assert compress_special(mask_of(SPECIAL_FIVE)) == "R-W-Dc-Rp-Cp"

    def test_singleton(self):
        assert compress_special(mask_of({A.READ_DATA})) == "R"

    def test_full_control_all_codes(self):
        s = compress_special(FULL_CONTROL_MASK)
        assert s.startswith("R-W-")
        assert len(s.split("-")) == 14

    def test_empty_rejected(self):
        with pytest.raises(EmptyMask):
            compress_special(AccessMask(0))

    def test_parse_paper_string(self):
        assert parse_compressed("R-W-Dc-Rp-Cp") == mask_of(SPECIAL_FIVE)

    def test_parse_single(self):
        assert parse_compressed("R") == mask_of({A.READ_DATA})

    def test_parse_unknown_code(self):
        with pytest.raises(UnknownCode):
            parse_compressed("R-Q")

    def test_parse_duplicate_code(self):
        with pytest.raises(DuplicateCode):
            parse_compressed("R-R")

    @given(nonempty_attr_sets)
    def test_round_trip(self, attrs):
        assert attributes_of(parse_compressed(compress_special(mask_of(attrs)))) == attrs


def test_table_order_fixed():
    # ReadData first, Synchronize last; compression respects it.
    order = list(A)
    assert order[0] is A.READ_DATA
    assert order[-1] is A.SYNCHRONIZE
    full = compress_special(FULL_CONTROL_MASK).split("-")
    assert full == [ATTRIBUTE_CODES[a] for a in order]
