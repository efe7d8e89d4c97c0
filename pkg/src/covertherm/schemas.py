"""JSON schemas for every document the CLI reads (draft 2020-12)."""

_num = {"type": "number"}
_vec2 = {"type": "array", "items": _num, "minItems": 2, "maxItems": 2}
_vec3 = {"type": "array", "items": _num, "minItems": 3, "maxItems": 3}
_shape = {"type": ["array", "null"], "items": {"type": "integer", "minimum": 1}, "minItems": 2, "maxItems": 2}

GRID = {
    "type": "object",
    "required": ["origin", "spacing", "width", "height"],
    "properties": {
        "origin": _vec2,
        "spacing": _num,
        "width": {"type": "integer"},
        "height": {"type": "integer"},
    },
    "additionalProperties": False,
}

JOINT_REF = {
    "oneOf": [
        {
            "type": "object",
            "required": ["limb"],
            "properties": {"limb": {"type": "integer"}, "end": {"enum": ["a", "b"]}},
            "additionalProperties": False,
        },
        {
            "type": "object",
            "required": ["relation"],
            "properties": {"relation": {"type": "integer", "minimum": 0}},
            "additionalProperties": False,
        },
    ]
}

WORLD = {
    "type": "object",
    "required": ["limbs"],
    "properties": {
        "bed_height": _num,
        "limbs": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "a", "b", "radius"],
                "properties": {
                    "id": {"type": "integer"},
                    "name": {"type": "string"},
                    "a": _vec3,
                    "b": _vec3,
                    "radius": _num,
                    "surface_temp_c": _num,
                },
                "additionalProperties": False,
            },
        },
        "relations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["limb_i", "limb_j", "point"],
                "properties": {"limb_i": {"type": "integer"}, "limb_j": {"type": "integer"}, "point": _vec3},
                "additionalProperties": False,
            },
        },
        "skeleton": {"type": "object", "additionalProperties": JOINT_REF},
    },
    "additionalProperties": False,
}

COVER = {
    "type": "object",
    "properties": {"thickness_m": _num, "tautness_radius_m": _num, "contact_gap_max_m": _num},
    "additionalProperties": False,
}

_edge = {"enum": ["ambient", "insulated"]}
THERMAL = {
    "type": "object",
    "properties": {
        "diffusivity_a": _num,
        "loss_rate_k": _num,
        "ambient_c": _num,
        "contact_c": _num,
        "dt_s": {"type": ["number", "null"]},
        "steps": {"type": "integer", "minimum": 0},
        "mode": {"enum": ["steady", "transient"]},
        "boundary": {"type": "object", "properties": {"x": _edge, "y": _edge}, "additionalProperties": False},
    },
    "additionalProperties": False,
}

RENDER = {
    "type": "object",
    "properties": {
        "band_um": _vec2,
        "t_min_c": {"type": ["number", "null"]},
        "t_max_c": {"type": ["number", "null"]},
        "camera_height_m": _num,
        "lwir_shape": _shape,
        "depth_shape": _shape,
    },
    "additionalProperties": False,
}

_per_modality = {
    "type": "object",
    "properties": {"lwir": _num, "depth": _num},
    "additionalProperties": False,
}

SCENARIO = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["grid", "world"],
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "seed": {"type": "integer"},
        "grid": GRID,
        "world": WORLD,
        "world_b": WORLD,
        "cover": COVER,
        "thermal": THERMAL,
        "render": RENDER,
        "lemma": {
            "type": "object",
            "properties": {"eps": _per_modality, "delta": _per_modality},
            "additionalProperties": False,
        },
        "outputs": {"type": "string"},
    },
    "additionalProperties": False,
}

JOINT_SET = {
    "type": "object",
    "required": ["joints"],
    "properties": {
        "joints": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "x", "y"],
                "properties": {
                    "name": {"type": "string"},
                    "x": _num,
                    "y": _num,
                    "visible": {"type": "boolean"},
                },
            },
        }
    },
}

JOINT_SETS = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "oneOf": [
        {"type": "array", "minItems": 1, "items": JOINT_SET},
        {
            "type": "object",
            "required": ["samples"],
            "properties": {"samples": {"type": "array", "minItems": 1, "items": JOINT_SET}},
        },
        JOINT_SET,
    ],
}
