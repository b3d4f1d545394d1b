"""Word lists for the synthetic testbed.

Each topic list is disjoint from every other list after stemming, so
documents from different topic groups share no topical terms.
"""

NEUTRAL = (
    "amber", "basil", "cedar", "dawn", "ember", "fable", "garnet", "harbor",
    "ivory", "jasper", "kettle", "lantern", "maple", "nectar", "opal", "pebble",
    "quartz", "ribbon", "saffron", "thistle", "umber", "velvet", "willow", "yarrow",
    "zephyr", "acorn", "bramble", "cobalt", "dune", "elm",
)

TOPICS = (
    (
        "starship", "galaxy", "nebula", "orbit", "comet", "asteroid", "planet", "rocket",
        "laser", "droid", "hyperdrive", "cosmos", "meteor", "pulsar", "quasar", "satellite",
        "astronaut", "lunar", "solar", "stellar", "eclipse", "gravity", "plasma", "photon",
        "cockpit", "hangar", "thruster", "warp", "module", "beacon",
    ),
    (
        "hero", "villain", "mutant", "shield", "hammer", "cape", "mask", "vigilante",
        "sidekick", "gadget", "armor", "serum", "spider", "thunder", "titan", "mystic",
        "sorcerer", "avenger", "rogue", "phantom", "sentinel", "crusader", "guardian", "nemesis",
        "lair", "costume", "emblem", "rescue", "menace", "secret",
    ),
    (
        "anchor", "harpoon", "mariner", "reef", "tide", "lagoon", "galleon", "compass",
        "buccaneer", "coral", "kraken", "lighthouse", "mast", "oar", "pearl", "pirate",
        "rudder", "sail", "schooner", "shipwreck", "starboard", "treasure", "voyage", "whale",
        "wharf", "dolphin", "trident", "cutlass", "parrot", "island",
    ),
    (
        "castle", "dragon", "wizard", "knight", "goblin", "potion", "scroll", "dungeon",
        "elf", "dwarf", "troll", "sword", "kingdom", "throne", "quest", "rune",
        "griffin", "paladin", "druid", "oracle", "citadel", "enchant", "fortress", "tavern",
        "bard", "squire", "unicorn", "warlock", "chalice", "banner",
    ),
)

CLASS_LABELS = ("character", "location", "artifact")
PROPERTY_LABELS = ("related to", "appears with", "owned by")
