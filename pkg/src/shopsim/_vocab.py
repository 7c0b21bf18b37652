"""Built-in vocabulary for the synthetic catalog generator.

Each category carries its own nouns, adjectives, attribute phrases, option
fields and subcategory chains so that generated product text is lexically
distinctive within a category and searchable across the catalog.
"""

BRANDS = [
    "norvik", "aldora", "brightpeak", "quellon", "vestra", "maplewood",
    "ironquill", "solbay", "tundrex", "casaluna", "pellway", "orvino",
]

MODEL_SYLLABLES = ["ax", "br", "cl", "dv", "ek", "fo", "gr", "hy", "jn", "kz"]

CATEGORY_VOCAB = {
    "fashion": {
        # each noun owns its chain so the fine-grain category matches the
        # product type named in titles and instructions
        "noun_chains": {
            "sneaker": ["shoes"], "jacket": ["clothing", "outerwear"],
            "dress": ["clothing"], "loafers": ["shoes"],
            "hoodie": ["clothing", "tops"], "jeans": ["clothing", "denim"],
            "scarf": ["accessories"], "boots": ["shoes"],
            "raincoat": ["clothing", "outerwear"],
            "cardigan": ["clothing", "tops"],
        },
        "adjectives": ["classic", "lightweight", "vintage", "athletic",
                       "casual", "tailored", "quilted", "woven"],
        "attributes": ["water resistant", "machine washable", "slim fit",
                       "breathable mesh", "genuine leather", "hand stitched",
                       "wrinkle free", "organic cotton", "fleece lined",
                       "quick drying", "soft sole", "reflective trim"],
        "options": {
            "color": ["black", "white", "navy", "red", "olive", "grey",
                      "burgundy", "beige"],
            "size": ["xs", "s", "m", "l", "xl", "xxl"],
        },
        "fillers": ["wardrobe", "season", "comfort", "outfit", "daily wear"],
    },
    "beauty": {
        "noun_chains": {
            "moisturizer": ["skin care", "face"], "serum": ["skin care", "face"],
            "shampoo": ["hair care"], "lipstick": ["makeup", "lips"],
            "cleanser": ["skin care", "face"], "sunscreen": ["sun care"],
            "conditioner": ["hair care"], "toner": ["skin care", "face"],
            "balm": ["skin care", "body"], "mascara": ["makeup", "eyes"],
        },
        "adjectives": ["hydrating", "gentle", "matte", "botanical",
                       "soothing", "brightening", "daily", "silky"],
        "attributes": ["cruelty free", "fragrance free", "dry skin",
                       "paraben free", "vegan formula", "oil free",
                       "sensitive skin", "vitamin c", "long lasting",
                       "dermatologist tested", "aloe vera", "spf protection"],
        "options": {
            "size": ["1 oz", "2 oz", "4 oz", "8 oz", "12 oz"],
            "scent": ["unscented", "lavender", "citrus", "rose", "coconut"],
        },
        "fillers": ["routine", "glow", "complexion", "texture", "finish"],
    },
    "electronics": {
        "noun_chains": {
            "headphones": ["audio"], "speaker": ["audio"],
            "keyboard": ["computers", "peripherals"],
            "monitor": ["computers", "displays"],
            "webcam": ["computers", "peripherals"], "charger": ["mobile"],
            "router": ["networking"], "earbuds": ["audio"],
            "mouse": ["computers", "peripherals"], "soundbar": ["audio"],
        },
        "adjectives": ["wireless", "compact", "portable", "ergonomic",
                       "smart", "rugged", "foldable", "backlit"],
        "attributes": ["noise cancelling", "fast charging", "bluetooth 5",
                       "long battery", "water proof", "usb c",
                       "surround sound", "low latency", "plug play",
                       "dual band", "touch control", "voice assistant"],
        "options": {
            "color": ["black", "white", "silver", "blue", "rose gold"],
            "capacity": ["16 gb", "32 gb", "64 gb", "128 gb", "256 gb"],
            "bundle": ["standard", "with case", "with dock"],
        },
        "fillers": ["device", "setup", "workspace", "travel", "signal"],
    },
    "furniture": {
        "noun_chains": {
            "armchair": ["living room", "seating"],
            "bookshelf": ["living room", "storage"], "desk": ["office"],
            "nightstand": ["bedroom"], "sofa": ["living room", "seating"],
            "barstool": ["dining"], "wardrobe": ["bedroom", "storage"],
            "ottoman": ["living room", "seating"], "recliner": ["living room", "seating"],
            "dresser": ["bedroom", "storage"],
        },
        "adjectives": ["modern", "rustic", "foldable", "upholstered",
                       "minimalist", "sturdy", "stackable", "adjustable"],
        "attributes": ["solid wood", "easy assembly", "scratch resistant",
                       "space saving", "velvet upholstery", "powder coated",
                       "weight capacity", "mid century", "tool free",
                       "stain resistant", "memory foam", "swivel base"],
        "options": {
            "color": ["walnut", "oak", "white", "black", "charcoal", "teal"],
            "material": ["wood", "metal", "rattan", "velvet", "linen"],
        },
        "fillers": ["room", "finish", "frame", "decor", "corner"],
    },
    "food": {
        "noun_chains": {
            "granola": ["pantry", "snacks"], "espresso": ["beverages", "coffee"],
            "trail mix": ["pantry", "snacks"], "olive oil": ["condiments", "oils"],
            "honey": ["pantry", "baking"], "pasta": ["pantry"],
            "jerky": ["pantry", "snacks"], "tea": ["beverages"],
            "dark chocolate": ["sweets"], "almond butter": ["condiments"],
        },
        "adjectives": ["organic", "roasted", "artisan", "stone ground",
                       "cold pressed", "small batch", "crunchy", "smoky"],
        "attributes": ["gluten free", "non gmo", "sugar free", "fair trade",
                       "single origin", "keto friendly", "whole grain",
                       "no preservatives", "high protein", "low sodium",
                       "shade grown", "family recipe"],
        "options": {
            "size": ["8 oz", "12 oz", "16 oz", "24 oz", "2 lb"],
            "pack": ["single", "pack of 2", "pack of 4", "pack of 6"],
            "flavor": ["original", "vanilla", "spicy", "sea salt", "maple"],
        },
        "fillers": ["pantry", "batch", "harvest", "roast", "blend"],
    },
}

DEFAULT_CATEGORIES = list(CATEGORY_VOCAB)
