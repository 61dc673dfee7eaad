#!/usr/bin/env python3
"""Writes data/task_templates.json, the built-in household task templates."""

import json
import pathlib

APPLIANCES = ["fridge", "microwave", "stove"]
FOOD = {"subtype": ["food"]}
TABLES = {"object_class": ["table", "coffee_table", "desk", "counter", "nightstand"]}


def role(name, filt, spawn=False, kind="asset", initial=None, initial_joint=None):
    r = {"name": name, "kind": kind, "filter": filt, "spawn": spawn}
    if initial:
        r["initial"] = {"relation": initial[0], "target": initial[1]}
    if initial_joint:
        r["initial_joint"] = {"part": initial_joint[0], "state": initial_joint[1]}
    return r


def in_(a, b):
    return {"predicate": "in", "subject": a, "object": b}


def on(a, b):
    return {"predicate": "on", "subject": a, "object": b}


def joint(a, part, state):
    return {"predicate": "joint_at", "subject": a, "part": part, "state": state}


def displaced(a, d):
    return {"predicate": "displaced", "subject": a, "distance": d}


def pressed(a, part="button_like"):
    return {"predicate": "pressed", "subject": a, "part": part}


def template(tid, tier, category, description, instruction, room, roles, goal, primary, counts):
    return {
        "template_id": tid,
        "tier": tier,
        "category": category,
        "description": description,
        "instruction": instruction,
        "room_requirement": room,
        "roles": roles,
        "goal": goal,
        "primary_role": primary,
        "default_counts": {"n_assets": counts[0], "n_sequences": counts[1]},
    }


appliance = {"object_class": APPLIANCES, "joint": "door_like"}

TEMPLATES = [
    template("pick_place_into_bowl", "basic", "pick_place",
             "Pick some objects and place them in the bowl.",
             "Pick up the {object} and place it in the {container}.", "kitchen",
             [role("object", FOOD, spawn=True), role("container", {"object_class": ["bowl"]})],
             [in_("object", "container")], "object", (10, 10)),
    template("pick_place_into_appliance", "basic", "pick_place",
             "Pick some objects and place them into the opened microwave / fridge / stove.",
             "Pick up the {object} and place it into the open {appliance}.", "kitchen",
             [role("appliance", appliance, initial_joint=("door_like", "open")),
              role("object", FOOD, spawn=True)],
             [in_("object", "appliance")], "appliance", (30, 10)),
    template("pick_out_of_bowl", "basic", "pick_place",
             "Pick some objects out from the bowl.",
             "Take the {object} out of the {container}.", "kitchen",
             [role("container", {"object_class": ["bowl"]}),
              role("object", FOOD, spawn=True, initial=("in", "container"))],
             [displaced("object", 0.2)], "object", (10, 10)),
    template("pick_out_of_appliance", "basic", "pick_place",
             "Pick some objects out from the opened microwave / fridge / stove.",
             "Take the {object} out of the open {appliance}.", "kitchen",
             [role("appliance", appliance, initial_joint=("door_like", "open")),
              role("object", FOOD, spawn=True, initial=("in", "appliance"))],
             [displaced("object", 0.3)], "appliance", (30, 10)),
    template("open_close_room_door", "basic", "open_close",
             "Open & Close doors of rooms.",
             "Open the {target} and then close it.", "any",
             [role("target", {"opening_kind": ["door"]}, kind="opening")],
             [joint("target", "door_like", "open"), joint("target", "door_like", "closed")],
             "target", (10, 20)),
    template("open_close_furniture_door", "basic", "open_close",
             "Open & Close doors of the furniture: fridges, microwaves, stoves.",
             "Open the door of the {target} and then close it.", "kitchen",
             [role("target", appliance)],
             [joint("target", "door_like", "open"), joint("target", "door_like", "closed")],
             "target", (30, 20)),
    template("push_pull_drawer", "basic", "push_pull",
             "Pull out & Push in the drawers.",
             "Pull out the drawer of the {target} and push it back in.", "any",
             [role("target", {"object_class": ["dresser", "cabinet", "fridge"], "joint": "drawer_like"})],
             [joint("target", "drawer_like", "open"), joint("target", "drawer_like", "closed")],
             "target", (10, 20)),
    template("push_button", "basic", "push_pull",
             "Push the buttons on microwaves / stoves.",
             "Push the button on the {target}.", "kitchen",
             [role("target", {"object_class": ["microwave", "stove"], "joint": "button_like"})],
             [pressed("target")], "target", (10, 20)),
    template("push_object_on_table", "basic", "push_pull",
             "Push some objects on the tables away from the robot.",
             "Push the {object} on the {table} away from you.", "any",
             [role("table", TABLES),
              role("object", {"object_class": ["book", "cup", "bowl"]}, spawn=True, initial=("on", "table"))],
             [displaced("object", 0.2)], "object", (10, 10)),
    template("organize_books", "multistage", "living_room",
             "Pick up the books on the table and walk to the shelf and organize them.",
             "Pick up the {book} from the {table}, walk to the {shelf} and put it away.", "living_room",
             [role("table", {"object_class": ["coffee_table", "table", "desk"]}),
              role("shelf", {"object_class": ["bookshelf"]}),
              role("book", {"object_class": ["book"]}, spawn=True, initial=("on", "table"))],
             [displaced("book", 0.3), on("book", "shelf")], "book", (10, 50)),
    template("serve_drinks", "multistage", "living_room",
             "Pick up the pitcher and the cup and pour the drink.",
             "Pick up the {pitcher} and the {cup} and pour the drink.", "living_room",
             [role("pitcher", {"object_class": ["pitcher"]}, spawn=True),
              role("cup", {"object_class": ["cup"]}, spawn=True)],
             [displaced("pitcher", 0.05), displaced("cup", 0.05)], "pitcher", (5, 30)),
    template("clean_table", "multistage", "living_room",
             "Pick up the trash on the table and walk to the trash bin to throw them away",
             "Pick up the {trash} from the {table} and throw it into the {bin}.", "living_room",
             [role("table", {"object_class": ["coffee_table", "table", "desk"]}),
              role("bin", {"object_class": ["trash_bin"]}),
              role("trash", {"object_class": ["trash"]}, spawn=True, initial=("on", "table"))],
             [displaced("trash", 0.3), in_("trash", "bin")], "trash", (10, 50)),
    template("make_bed", "multistage", "bedroom",
             "Slide the objects on the bed away and put the pillow on the top of the bed",
             "Slide the {clutter} off the {bed} and put the {pillow} on top of it.", "bedroom",
             [role("bed", {"object_class": ["bed"]}),
              role("clutter", {"object_class": ["book", "clothing"]}, spawn=True, initial=("on", "bed")),
              role("pillow", {"object_class": ["pillow"]}, spawn=True)],
             [displaced("clutter", 0.3), on("pillow", "bed")], "pillow", (10, 50)),
    template("hang_clothes", "multistage", "bedroom",
             "Pick up the clothes rack and open the closets and hang them in.",
             "Pick up the {hanger}, open the {closet} and hang it inside.", "bedroom",
             [role("closet", {"object_class": ["closet"], "joint": "door_like"}),
              role("hanger", {"object_class": ["hanger"]}, spawn=True)],
             [joint("closet", "door_like", "open"), in_("hanger", "closet")], "hanger", (10, 50)),
    template("set_alarm", "multistage", "bedroom",
             "Pick up the alarm clock and push the button.",
             "Pick up the {clock} and push its button.", "bedroom",
             [role("clock", {"object_class": ["alarm_clock"], "joint": "button_like"}, spawn=True)],
             [displaced("clock", 0.05), pressed("clock")], "clock", (5, 30)),
    template("store_dish_in_fridge", "multistage", "kitchen",
             "Pick up dishes on the table and store it into the fridge.",
             "Pick up the {dish} from the {table} and store it in the {fridge}.", "kitchen",
             [role("table", {"object_class": ["table", "counter"]}),
              role("fridge", {"object_class": ["fridge"], "joint": "door_like"}),
              role("dish", {"object_class": ["dish"]}, spawn=True, initial=("on", "table"))],
             [joint("fridge", "door_like", "open"), in_("dish", "fridge"), joint("fridge", "door_like", "closed")],
             "dish", (5, 30)),
    template("heat_food", "multistage", "kitchen",
             "Pick up the food and turn around to open the microwave and put the food in.",
             "Pick up the {food}, open the {microwave}, put the food in and start it.", "kitchen",
             [role("microwave", {"object_class": ["microwave"], "joint": "door_like"}),
              role("food", FOOD, spawn=True)],
             [joint("microwave", "door_like", "open"), in_("food", "microwave"),
              joint("microwave", "door_like", "closed"), pressed("microwave")],
             "food", (5, 50)),
    template("clean_dishes", "multistage", "kitchen",
             "Pick up the dishes on the rack and the sponge and clean the dishes.",
             "Pick up the {dish} from the {rack} and the {sponge}, clean the dish and put it back.", "kitchen",
             [role("rack", {"object_class": ["dish_rack"]}),
              role("dish", {"object_class": ["dish"]}, spawn=True, initial=("in", "rack")),
              role("sponge", {"object_class": ["sponge"]}, spawn=True)],
             [displaced("sponge", 0.05), displaced("dish", 0.1), in_("dish", "rack")], "dish", (5, 50)),
]

if __name__ == "__main__":
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "task_templates.json"
    doc = {"schema_version": "agentworld-tasks/1", "templates": TEMPLATES}
    out.write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {len(TEMPLATES)} templates to {out}")
