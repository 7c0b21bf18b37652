import pytest

from shopsim.catalog import Catalog, CatalogConfig, Product, generate_synthetic_catalog
from shopsim.goals import GoalConfig, generate_goals
from shopsim.search import build_index
from shopsim.session import Env


def make_product(pid, title, description="", overview="", price=10.0,
                 options=None, attributes=(), category="fashion",
                 chain=("shoes", "sneakers")):
    return Product(
        id=pid, title=title, description=description, overview=overview,
        price=price, option_groups=options or {},
        attributes=frozenset(attributes), category=category,
        subcategory_chain=tuple(chain),
    )


@pytest.fixture(scope="session")
def small_catalog():
    return generate_synthetic_catalog(CatalogConfig(n_products=50), seed=3)


@pytest.fixture(scope="session")
def small_index(small_catalog):
    return build_index(small_catalog)


@pytest.fixture(scope="session")
def small_env(small_catalog, small_index):
    goals = generate_goals(small_catalog, n=30, seed=100,
                           config=GoalConfig(max_att=2, max_opt=2))
    return Env(small_catalog, small_index, goals)


@pytest.fixture(scope="session")
def medium_catalog():
    return generate_synthetic_catalog(CatalogConfig(n_products=200), seed=9)


@pytest.fixture(scope="session")
def medium_env(medium_catalog):
    index = build_index(medium_catalog)
    goals = generate_goals(medium_catalog, n=60, seed=500)
    return Env(medium_catalog, index, goals)


@pytest.fixture
def tiny_catalog():
    return Catalog(products=[
        make_product("a1", "Zephyr Trail Sneaker Kt77",
                     description="breathable mesh sneaker for muddy trails",
                     options={"color": ["red", "blue"], "size": ["s", "m"]},
                     attributes=("breathable mesh",)),
        make_product("b2", "Cobalt Rain Jacket Vq19",
                     description="water resistant shell jacket with hood",
                     options={"color": ["navy"]},
                     attributes=("water resistant",),
                     chain=("clothing", "outerwear")),
        make_product("c3", "Juniper Espresso Roast Pk40",
                     description="small batch dark roast beans",
                     options={"size": ["8 oz", "12 oz"]},
                     attributes=("small batch",), category="food",
                     chain=("beverages", "coffee")),
    ])
