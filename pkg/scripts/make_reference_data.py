#!/usr/bin/env python3
"""Regenerate the packaged gazetteer and schematic region shapes.

The gazetteer covers the 13 metropolitan regions (current and pre-2016
names), all 96 departments and the larger cities, keys pre-normalized
(casefolded, accents stripped). The shapes file is a deliberately
schematic tile map — one rectangle per region, laid out roughly like
France — sufficient for choropleth rendering and tests, not for real
cartography.
"""

from __future__ import annotations

import csv
import json
import sys
import unicodedata
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "rtgraph" / "data"

REGIONS = {
    "ARA": "Auvergne-Rhône-Alpes",
    "BFC": "Bourgogne-Franche-Comté",
    "BRE": "Bretagne",
    "CVL": "Centre-Val de Loire",
    "COR": "Corse",
    "GES": "Grand Est",
    "HDF": "Hauts-de-France",
    "IDF": "Île-de-France",
    "NOR": "Normandie",
    "NAQ": "Nouvelle-Aquitaine",
    "OCC": "Occitanie",
    "PDL": "Pays de la Loire",
    "PAC": "Provence-Alpes-Côte d'Azur",
}

DEPARTMENTS = {
    "ARA": ["Ain", "Allier", "Ardèche", "Cantal", "Drôme", "Isère", "Loire", "Haute-Loire",
            "Puy-de-Dôme", "Rhône", "Savoie", "Haute-Savoie"],
    "BFC": ["Côte-d'Or", "Doubs", "Jura", "Nièvre", "Haute-Saône", "Saône-et-Loire", "Yonne",
            "Territoire de Belfort"],
    "BRE": ["Côtes-d'Armor", "Finistère", "Ille-et-Vilaine", "Morbihan"],
    "CVL": ["Cher", "Eure-et-Loir", "Indre", "Indre-et-Loire", "Loir-et-Cher", "Loiret"],
    "COR": ["Corse-du-Sud", "Haute-Corse"],
    "GES": ["Ardennes", "Aube", "Marne", "Haute-Marne", "Meurthe-et-Moselle", "Meuse",
            "Moselle", "Bas-Rhin", "Haut-Rhin", "Vosges"],
    "HDF": ["Aisne", "Nord", "Oise", "Pas-de-Calais", "Somme"],
    "IDF": ["Paris", "Seine-et-Marne", "Yvelines", "Essonne", "Hauts-de-Seine",
            "Seine-Saint-Denis", "Val-de-Marne", "Val-d'Oise"],
    "NOR": ["Calvados", "Eure", "Manche", "Orne", "Seine-Maritime"],
    "NAQ": ["Charente", "Charente-Maritime", "Corrèze", "Creuse", "Dordogne", "Gironde",
            "Landes", "Lot-et-Garonne", "Pyrénées-Atlantiques", "Deux-Sèvres", "Vienne",
            "Haute-Vienne"],
    "OCC": ["Ariège", "Aude", "Aveyron", "Gard", "Haute-Garonne", "Gers", "Hérault", "Lot",
            "Lozère", "Hautes-Pyrénées", "Pyrénées-Orientales", "Tarn", "Tarn-et-Garonne"],
    "PDL": ["Loire-Atlantique", "Maine-et-Loire", "Mayenne", "Sarthe", "Vendée"],
    "PAC": ["Alpes-de-Haute-Provence", "Hautes-Alpes", "Alpes-Maritimes", "Bouches-du-Rhône",
            "Var", "Vaucluse"],
}

OLD_REGIONS = {
    "Rhône-Alpes": "ARA", "Auvergne": "ARA",
    "Bourgogne": "BFC", "Franche-Comté": "BFC",
    "Centre": "CVL",
    "Alsace": "GES", "Lorraine": "GES", "Champagne-Ardenne": "GES",
    "Picardie": "HDF", "Nord-Pas-de-Calais": "HDF",
    "Basse-Normandie": "NOR", "Haute-Normandie": "NOR",
    "Aquitaine": "NAQ", "Poitou-Charentes": "NAQ", "Limousin": "NAQ",
    "Midi-Pyrénées": "OCC", "Languedoc-Roussillon": "OCC",
    "Provence": "PAC", "Côte d'Azur": "PAC",
}

CITIES = {
    "ARA": ["Lyon", "Villeurbanne", "Saint-Étienne", "Grenoble", "Clermont-Ferrand", "Annecy",
            "Chambéry", "Valence", "Vichy", "Aurillac", "Le Puy-en-Velay", "Bourg-en-Bresse",
            "Roanne", "Montélimar"],
    "BFC": ["Dijon", "Besançon", "Belfort", "Auxerre", "Chalon-sur-Saône", "Nevers", "Mâcon",
            "Montbéliard", "Vesoul", "Lons-le-Saunier"],
    "BRE": ["Rennes", "Brest", "Quimper", "Lorient", "Vannes", "Saint-Malo", "Saint-Brieuc"],
    "CVL": ["Tours", "Orléans", "Bourges", "Chartres", "Blois", "Châteauroux"],
    "COR": ["Ajaccio", "Bastia", "Porto-Vecchio", "Corte"],
    "GES": ["Strasbourg", "Reims", "Metz", "Nancy", "Mulhouse", "Troyes", "Colmar",
            "Charleville-Mézières", "Épinal", "Châlons-en-Champagne", "Haguenau", "Thionville"],
    "HDF": ["Lille", "Amiens", "Roubaix", "Tourcoing", "Dunkerque", "Calais", "Arras",
            "Beauvais", "Compiègne", "Valenciennes", "Boulogne-sur-Mer", "Douai", "Lens",
            "Saint-Quentin"],
    "IDF": ["Boulogne-Billancourt", "Saint-Denis", "Argenteuil", "Montreuil", "Nanterre",
            "Vitry-sur-Seine", "Créteil", "Versailles", "Courbevoie", "Colombes",
            "Aulnay-sous-Bois", "Rueil-Malmaison", "Champigny-sur-Marne", "Levallois-Perret",
            "Issy-les-Moulineaux", "Évry", "Cergy", "Melun"],
    "NOR": ["Rouen", "Le Havre", "Caen", "Cherbourg", "Évreux", "Dieppe", "Alençon"],
    "NAQ": ["Bordeaux", "Limoges", "Poitiers", "La Rochelle", "Pau", "Bayonne", "Biarritz",
            "Angoulême", "Niort", "Mérignac", "Pessac", "Brive-la-Gaillarde", "Agen",
            "Périgueux", "Mont-de-Marsan"],
    "OCC": ["Toulouse", "Montpellier", "Nîmes", "Perpignan", "Béziers", "Montauban", "Narbonne",
            "Albi", "Carcassonne", "Castres", "Sète", "Tarbes", "Rodez", "Cahors", "Mende",
            "Auch", "Foix"],
    "PDL": ["Nantes", "Angers", "Le Mans", "Saint-Nazaire", "Cholet", "Laval",
            "La Roche-sur-Yon", "Saumur"],
    "PAC": ["Marseille", "Nice", "Toulon", "Aix-en-Provence", "Avignon", "Cannes", "Antibes",
            "Fréjus", "Arles", "Gap", "Istres", "Digne-les-Bains", "Grasse", "Hyères",
            "Saint-Raphaël", "Salon-de-Provence"],
}

EXTRA_FORMS = {
    "idf": "IDF", "ile de france": "IDF", "region parisienne": "IDF", "région parisienne": "IDF",
    "paris, france": "IDF", "paris france": "IDF", "paname": "IDF", "75": "IDF",
    "paca": "PAC", "cote d'azur": "PAC", "french riviera": "PAC",
    "marseille, france": "PAC", "nice, france": "PAC",
    "lyon, france": "ARA", "grenoble, france": "ARA",
    "bordeaux, france": "NAQ", "pays basque": "NAQ",
    "toulouse, france": "OCC", "montpellier, france": "OCC",
    "lille, france": "HDF", "nord": "HDF",
    "strasbourg, france": "GES", "alsace, france": "GES",
    "nantes, france": "PDL", "rennes, france": "BRE", "bretagne, france": "BRE",
    "corse du sud": "COR", "corsica": "COR",
    "normandie, france": "NOR", "rouen, france": "NOR",
}

# Tile-map layout: (x, y) lower-left corner of each region's rectangle in an
# abstract plane laid out roughly like the hexagon.
TILE_LAYOUT = {
    "HDF": (3.0, 6.0),
    "NOR": (1.4, 4.9),
    "IDF": (3.0, 4.9),
    "GES": (4.6, 4.9),
    "BRE": (-0.2, 3.8),
    "PDL": (1.4, 3.8),
    "CVL": (3.0, 3.8),
    "BFC": (4.6, 3.8),
    "NAQ": (1.4, 2.1),
    "ARA": (4.2, 2.4),
    "OCC": (2.6, 0.6),
    "PAC": (4.6, 0.9),
    "COR": (6.4, 0.0),
}
TILE_W, TILE_H = 1.45, 0.95


def normalize(text):
    folded = text.casefold()
    decomposed = unicodedata.normalize("NFKD", folded)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch)).strip()


def build_gazetteer():
    rows = {}

    def add(surface, code):
        rows.setdefault(normalize(surface), REGIONS[code])

    for code, region in REGIONS.items():
        add(region, code)
        add(region.replace("-", " "), code)
    for old, code in OLD_REGIONS.items():
        add(old, code)
    for code, departments in DEPARTMENTS.items():
        for department in departments:
            add(department, code)
    for code, cities in CITIES.items():
        for city in cities:
            add(city, code)
    for surface, code in EXTRA_FORMS.items():
        add(surface, code)
    return sorted(rows.items())


def build_shapes():
    features = []
    for code in sorted(REGIONS, key=lambda c: REGIONS[c]):
        x, y = TILE_LAYOUT[code]
        ring = [
            [x, y],
            [x + TILE_W, y],
            [x + TILE_W, y + TILE_H],
            [x, y + TILE_H],
            [x, y],
        ]
        features.append(
            {
                "type": "Feature",
                "properties": {"name": REGIONS[code], "code": code, "schematic": True},
                "geometry": {"type": "Polygon", "coordinates": [ring]},
            }
        )
    return {"type": "FeatureCollection", "features": features}


def main():
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    gaz_path = DATA_DIR / "gazetteer_fr.csv"
    with open(gaz_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["location_normalized", "region"])
        writer.writerows(build_gazetteer())
    shapes_path = DATA_DIR / "regions_fr.geojson"
    with open(shapes_path, "w", encoding="utf-8") as fh:
        json.dump(build_shapes(), fh, ensure_ascii=False, indent=1)
        fh.write("\n")
    print(f"wrote {gaz_path} and {shapes_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
