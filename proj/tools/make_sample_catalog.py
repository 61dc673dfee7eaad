#!/usr/bin/env python3
"""Writes data/sample_catalog.json, the demo asset and material library.

The output is deterministic; rerun after editing the tables below.
"""

import json
import pathlib

LIVING, KITCHEN, BEDROOM, ANY = "living_room", "kitchen", "bedroom", "any"

assets = []


def add(prefix, n, *, name, category, subtype, cls, rooms, sizes, material, tags,
        parts=None, mass=None, high_fidelity=False):
    """Adds `n` variants; sizes and materials cycle through the given lists."""
    materials = material if isinstance(material, list) else [material]
    for i in range(n):
        x, y, z = sizes[i % len(sizes)]
        rec = {
            "asset_id": f"{prefix}_{i + 1:02d}",
            "display_name": f"{name} {i + 1}",
            "category": category,
            "subtype": subtype,
            "object_class": cls,
            "room_affinity": sorted(rooms),
            "bounds": {"x": x, "y": y, "z": z},
            "material_class": materials[i % len(materials)],
            "placement_tags": sorted(tags),
            "mesh_ref": f"meshes/{prefix}_{i + 1:02d}.glb",
        }
        if parts:
            rec["articulation"] = {"parts": [dict(p) for p in parts(i)]}
        if mass is not None:
            rec["mass_hint"] = mass[i % len(mass)]
        if high_fidelity:
            rec["high_fidelity"] = True
        assets.append(rec)


def part(pid, joint, travel):
    return {"part_id": pid, "joint": joint, "travel_hint": travel}


# Basic furniture.
add("sofa", 4, name="Sofa", category="basic", subtype="furniture", cls="sofa", rooms=[LIVING],
    sizes=[(2.0, 0.9, 0.85), (1.8, 0.85, 0.8), (2.2, 0.95, 0.9), (1.6, 0.85, 0.8)],
    material="fabric", tags=["on_floor"])
add("tv", 3, name="TV set", category="basic", subtype="appliance", cls="tv", rooms=[LIVING],
    sizes=[(1.2, 0.4, 1.1), (1.4, 0.45, 1.2), (1.0, 0.4, 1.0)],
    material=["plastic", "metal"], tags=["on_floor"])
add("coffee_table", 3, name="Coffee table", category="basic", subtype="furniture",
    cls="coffee_table", rooms=[LIVING], sizes=[(1.0, 0.6, 0.45), (1.2, 0.6, 0.42), (0.9, 0.9, 0.4)],
    material=["wood", "glass", "wood"], tags=["on_floor"])
add("bookshelf", 3, name="Bookshelf", category="basic", subtype="furniture", cls="bookshelf",
    rooms=[LIVING, BEDROOM], sizes=[(0.9, 0.35, 1.8), (1.2, 0.4, 1.9), (0.8, 0.3, 1.6)],
    material="wood", tags=["on_floor"])
add("chair", 4, name="Chair", category="basic", subtype="furniture", cls="chair",
    rooms=[LIVING, KITCHEN, BEDROOM], sizes=[(0.5, 0.5, 0.9), (0.45, 0.5, 0.85), (0.55, 0.55, 0.95)],
    material=["wood", "metal", "wood", "plastic"], tags=["on_floor"])
add("bed", 3, name="Bed", category="basic", subtype="furniture", cls="bed", rooms=[BEDROOM],
    sizes=[(1.6, 2.05, 0.55), (1.4, 2.0, 0.5), (1.2, 2.0, 0.5)],
    material=["fabric", "wood", "fabric"], tags=["on_floor"])
add("table", 4, name="Dining table", category="basic", subtype="furniture", cls="table",
    rooms=[KITCHEN], sizes=[(1.2, 0.8, 0.75), (1.6, 0.8, 0.75), (1.0, 0.7, 0.74), (1.4, 0.9, 0.76)],
    material=["wood", "wood", "stone", "metal"], tags=["on_floor"])
add("counter", 3, name="Kitchen counter", category="basic", subtype="furniture", cls="counter",
    rooms=[KITCHEN], sizes=[(1.8, 0.6, 0.9), (1.5, 0.6, 0.9), (2.1, 0.65, 0.92)],
    material=["stone", "wood", "stone"], tags=["on_floor"])
add("nightstand", 3, name="Nightstand", category="basic", subtype="furniture", cls="nightstand",
    rooms=[BEDROOM], sizes=[(0.5, 0.4, 0.55), (0.45, 0.4, 0.6), (0.55, 0.45, 0.5)],
    material="wood", tags=["on_floor"])
add("desk", 2, name="Desk", category="basic", subtype="furniture", cls="desk", rooms=[BEDROOM],
    sizes=[(1.2, 0.6, 0.75), (1.0, 0.55, 0.74)], material=["wood", "metal"], tags=["on_floor"])

# Articulated interactables.
add("fridge", 10, name="Fridge", category="interactable", subtype="appliance", cls="fridge",
    rooms=[KITCHEN], sizes=[(0.7, 0.7, 1.8), (0.6, 0.65, 1.7), (0.8, 0.7, 1.85), (0.65, 0.65, 1.6)],
    material="metal", tags=["on_floor"],
    parts=lambda i: [part("door", "door_like", 110.0)] +
    ([part("freezer_drawer", "drawer_like", 0.4)] if i % 2 == 0 else []))
add("microwave", 10, name="Microwave", category="interactable", subtype="appliance",
    cls="microwave", rooms=[KITCHEN], sizes=[(0.5, 0.36, 0.3), (0.45, 0.35, 0.28), (0.55, 0.4, 0.32)],
    material=["metal", "plastic"], tags=["on_surface"],
    parts=lambda i: [part("door", "door_like", 100.0), part("start_button", "button_like", 0.004)])
add("stove", 10, name="Stove", category="interactable", subtype="appliance", cls="stove",
    rooms=[KITCHEN], sizes=[(0.6, 0.6, 0.9), (0.75, 0.6, 0.9), (0.6, 0.65, 0.92)],
    material="metal", tags=["on_floor"],
    parts=lambda i: [part("oven_door", "door_like", 90.0), part("knob_button", "button_like", 0.003)])
add("dresser", 6, name="Dresser", category="interactable", subtype="furniture", cls="dresser",
    rooms=[BEDROOM, LIVING], sizes=[(1.0, 0.45, 0.8), (0.8, 0.45, 0.9), (1.2, 0.5, 0.75)],
    material="wood", tags=["on_floor"],
    parts=lambda i: [part(f"drawer_{k}", "drawer_like", 0.35) for k in range(1, 4)])
add("cabinet", 4, name="Cabinet", category="interactable", subtype="furniture", cls="cabinet",
    rooms=[LIVING, KITCHEN], sizes=[(0.8, 0.4, 0.9), (0.6, 0.4, 1.0)], material=["wood", "metal"],
    tags=["on_floor"],
    parts=lambda i: [part("door", "door_like", 95.0), part("drawer", "drawer_like", 0.3)])
add("closet", 4, name="Closet", category="interactable", subtype="furniture", cls="closet",
    rooms=[BEDROOM], sizes=[(1.0, 0.6, 2.0), (1.2, 0.6, 2.1), (0.9, 0.55, 1.9)], material="wood",
    tags=["on_floor"], parts=lambda i: [part("door", "door_like", 100.0)])
add("alarm_clock", 5, name="Alarm clock", category="interactable", subtype="appliance",
    cls="alarm_clock", rooms=[BEDROOM], sizes=[(0.12, 0.07, 0.1), (0.1, 0.06, 0.12)],
    material="plastic", tags=["on_surface"], mass=[0.25, 0.3],
    parts=lambda i: [part("snooze_button", "button_like", 0.003)])

# Containers and small objects.
add("bowl", 5, name="Bowl", category="interactable", subtype="container", cls="bowl",
    rooms=[KITCHEN, LIVING], sizes=[(0.3, 0.3, 0.1), (0.32, 0.32, 0.11), (0.28, 0.28, 0.09)],
    material=["ceramic", "glass", "plastic"], tags=["on_surface"], mass=[0.4, 0.5, 0.2])
add("dish", 8, name="Dish", category="interactable", subtype="container", cls="dish",
    rooms=[KITCHEN], sizes=[(0.24, 0.24, 0.03), (0.2, 0.2, 0.03), (0.26, 0.26, 0.04)],
    material="ceramic", tags=["on_surface", "in_container"], high_fidelity=True)
add("cup", 5, name="Cup", category="interactable", subtype="container", cls="cup",
    rooms=[KITCHEN, LIVING], sizes=[(0.08, 0.08, 0.1), (0.09, 0.09, 0.11)],
    material=["ceramic", "glass"], tags=["on_surface", "in_container"])
add("pitcher", 5, name="Pitcher", category="interactable", subtype="container", cls="pitcher",
    rooms=[KITCHEN, LIVING], sizes=[(0.15, 0.12, 0.25), (0.14, 0.12, 0.22)],
    material=["glass", "ceramic", "plastic"], tags=["on_surface"])
add("dish_rack", 3, name="Dish rack", category="interactable", subtype="container",
    cls="dish_rack", rooms=[KITCHEN], sizes=[(0.6, 0.5, 0.15), (0.65, 0.5, 0.16)],
    material=["plastic", "metal"], tags=["on_surface"])
add("trash_bin", 3, name="Trash bin", category="interactable", subtype="container",
    cls="trash_bin", rooms=[ANY], sizes=[(0.35, 0.35, 0.45), (0.3, 0.3, 0.4)],
    material=["plastic", "metal"], tags=["on_floor"])
add("sponge", 5, name="Sponge", category="interactable", subtype="tool", cls="sponge",
    rooms=[KITCHEN], sizes=[(0.1, 0.07, 0.03), (0.11, 0.07, 0.04)], material="plastic",
    tags=["on_surface"], mass=[0.02])

FOODS = ["apple", "orange", "banana", "bread_roll", "pear", "tomato", "lemon", "peach", "carrot",
         "potato"]
FOOD_SIZES = [(0.08, 0.08, 0.08), (0.08, 0.08, 0.08), (0.18, 0.05, 0.04), (0.18, 0.1, 0.08),
              (0.07, 0.07, 0.1), (0.07, 0.07, 0.06), (0.06, 0.06, 0.07), (0.07, 0.07, 0.07),
              (0.18, 0.03, 0.03), (0.09, 0.06, 0.06)]
for i, food in enumerate(FOODS):
    x, y, z = FOOD_SIZES[i]
    assets.append({
        "asset_id": food,
        "display_name": food.replace("_", " ").capitalize(),
        "category": "interactable",
        "subtype": "food",
        "object_class": food,
        "room_affinity": [KITCHEN, LIVING],
        "bounds": {"x": x, "y": y, "z": z},
        "material_class": "organic",
        "placement_tags": ["in_container", "on_surface"],
        "mass_hint": round(0.1 + 0.02 * i, 2),
        "mesh_ref": f"meshes/{food}.glb",
    })

add("book", 12, name="Book", category="interactable", subtype="decor", cls="book",
    rooms=[LIVING, BEDROOM], sizes=[(0.2, 0.15, 0.04), (0.24, 0.17, 0.05), (0.18, 0.12, 0.03)],
    material="organic", tags=["on_surface", "on_bed"])
add("trash", 10, name="Trash item", category="interactable", subtype="other", cls="trash",
    rooms=[LIVING, KITCHEN], sizes=[(0.07, 0.07, 0.12), (0.1, 0.08, 0.06), (0.06, 0.06, 0.2)],
    material=["metal", "organic", "plastic"], tags=["on_surface", "in_container"])
add("pillow", 10, name="Pillow", category="interactable", subtype="decor", cls="pillow",
    rooms=[BEDROOM, LIVING], sizes=[(0.6, 0.4, 0.15), (0.5, 0.5, 0.15), (0.7, 0.45, 0.18)],
    material="fabric", tags=["on_bed"])
add("clothing", 6, name="Folded shirt", category="interactable", subtype="clothing",
    cls="clothing", rooms=[BEDROOM], sizes=[(0.35, 0.3, 0.05), (0.4, 0.3, 0.06)],
    material="fabric", tags=["on_bed", "on_surface"])
add("hanger", 10, name="Clothes hanger", category="interactable", subtype="clothing",
    cls="hanger", rooms=[BEDROOM], sizes=[(0.42, 0.06, 0.5), (0.45, 0.08, 0.6)],
    material=["fabric", "plastic", "wood", "metal"], tags=["hangable", "on_bed"])
add("vase", 3, name="Vase", category="interactable", subtype="decor", cls="vase",
    rooms=[LIVING, BEDROOM], sizes=[(0.15, 0.15, 0.3), (0.12, 0.12, 0.25)],
    material=["ceramic", "glass"], tags=["on_surface"], high_fidelity=True)
add("painting", 3, name="Painting", category="interactable", subtype="decor", cls="painting",
    rooms=[LIVING, BEDROOM], sizes=[(0.8, 0.04, 0.6), (0.6, 0.03, 0.5)], material="wood",
    tags=["wall_mounted"])


def material(mid, family, applicable, color, roughness, metallic):
    return {"material_id": mid, "family": family, "applicable_to": sorted(applicable),
            "pbr_params": {"base_color": list(color), "roughness": roughness,
                           "metallic": metallic}}


materials = [
    material("wall_marble_white", "marble", ["wall"], (0.92, 0.91, 0.88), 0.2, 0.0),
    material("wall_brick_red", "brick", ["wall"], (0.6, 0.27, 0.2), 0.9, 0.0),
    material("wall_paint_beige", "paint", ["wall", "ceiling"], (0.86, 0.8, 0.68), 0.7, 0.0),
    material("wall_paint_grey", "paint", ["wall"], (0.6, 0.6, 0.62), 0.7, 0.0),
    material("wall_tile_white", "tile", ["wall", "floor"], (0.95, 0.95, 0.95), 0.3, 0.0),
    material("ceiling_paint_white", "paint", ["ceiling"], (0.97, 0.97, 0.97), 0.8, 0.0),
    material("floor_oak_planks", "wood_grain", ["floor"], (0.62, 0.45, 0.28), 0.6, 0.0),
    material("floor_marble_grey", "marble", ["floor"], (0.7, 0.7, 0.72), 0.25, 0.0),
    material("floor_tile_terracotta", "tile", ["floor"], (0.72, 0.4, 0.3), 0.5, 0.0),
    material("wood_oak", "wood_grain", ["asset:wood"], (0.66, 0.5, 0.32), 0.55, 0.0),
    material("wood_walnut", "wood_grain", ["asset:wood"], (0.36, 0.24, 0.16), 0.5, 0.0),
    material("wood_painted_white", "paint", ["asset:wood"], (0.93, 0.93, 0.9), 0.6, 0.0),
    material("metal_brushed_steel", "metallic_coating", ["asset:metal"], (0.75, 0.75, 0.76), 0.35, 1.0),
    material("metal_chrome", "metallic_coating", ["asset:metal"], (0.9, 0.9, 0.92), 0.1, 1.0),
    material("metal_painted_black", "paint", ["asset:metal"], (0.08, 0.08, 0.08), 0.5, 0.3),
    material("ceramic_glazed_white", "ceramic_finish", ["asset:ceramic"], (0.96, 0.96, 0.94), 0.15, 0.0),
    material("ceramic_matte_blue", "ceramic_finish", ["asset:ceramic"], (0.3, 0.4, 0.6), 0.6, 0.0),
    material("fabric_linen", "fabric_texture", ["asset:fabric"], (0.85, 0.8, 0.72), 0.9, 0.0),
    material("fabric_velvet_green", "fabric_texture", ["asset:fabric"], (0.15, 0.35, 0.25), 0.8, 0.0),
    material("plastic_glossy_red", "paint", ["asset:plastic"], (0.8, 0.1, 0.1), 0.3, 0.0),
    material("plastic_matte_white", "paint", ["asset:plastic"], (0.92, 0.92, 0.92), 0.7, 0.0),
    material("glass_clear", "paint", ["asset:glass"], (0.9, 0.95, 0.95), 0.05, 0.0),
    material("glass_frosted", "paint", ["asset:glass"], (0.85, 0.88, 0.9), 0.4, 0.0),
    material("stone_marble_counter", "marble", ["asset:stone"], (0.9, 0.9, 0.88), 0.2, 0.0),
    material("stone_granite_tile", "tile", ["asset:stone"], (0.35, 0.33, 0.32), 0.4, 0.0),
    material("organic_natural", "paint", ["asset:organic"], (0.7, 0.55, 0.3), 0.8, 0.0),
    material("organic_ripe", "paint", ["asset:organic"], (0.8, 0.3, 0.15), 0.6, 0.0),
]

rules = [
    {"subject": "pillow", "relation": "requires", "object": "bed"},
    {"subject": "dish_rack", "relation": "requires", "object": "counter"},
    {"subject": "stove", "relation": "excludes", "object": "bed"},
    {"subject": "vase", "relation": "excludes", "object": "trash_bin"},
    {"subject": "cup", "relation": "prefers_near", "object": "pitcher", "weight": 2.0},
    {"subject": "sponge", "relation": "prefers_near", "object": "dish_rack", "weight": 3.0},
    {"subject": "book", "relation": "prefers_near", "object": "bookshelf", "weight": 1.0},
]

doc = {
    "schema_version": "agentworld-catalog/1",
    "assets": sorted(assets, key=lambda a: a["asset_id"]),
    "materials": materials,
    "co_occurrence": rules,
}

out = pathlib.Path(__file__).resolve().parent.parent / "data" / "sample_catalog.json"
out.write_text(json.dumps(doc, indent=2) + "\n")
print(f"wrote {len(assets)} assets, {len(materials)} materials to {out}")
