#include <algorithm>
#include <cmath>

#include "tpem/taskstream/corpus.hpp"

namespace tpem::stream {
namespace {

using Lexicons = std::map<std::string, std::vector<std::string>>;

std::size_t scaled(std::size_t n, double scale) {
  return std::max<std::size_t>(4, static_cast<std::size_t>(std::lround(static_cast<double>(n) * scale)));
}

TaskSpec make(std::string name, int id, std::string subject_type, std::vector<std::string> relations, Lexicons lexicons,
              std::vector<UtteranceTemplate> templates, std::size_t n_train, std::size_t n_eval) {
  TaskSpec s;
  s.name = std::move(name);
  s.task_id = id;
  s.subject_type = std::move(subject_type);
  s.relations = std::move(relations);
  s.lexicons = std::move(lexicons);
  s.templates = std::move(templates);
  s.n_train = n_train;
  s.n_val = n_eval;
  s.n_test = n_eval;
  s.openers = {{"hello", "hello how can i help"},
               {"hi i need some help", "sure what do you need"},
               {"thanks for earlier", "you are welcome"}};
  return s;
}

}  // namespace

std::vector<TaskSpec> default_stream(double scale, std::uint64_t seed) {
  std::vector<TaskSpec> specs;

  specs.push_back(make(
      "schedule", 1, "event", {"date", "time", "party"},
      {{"event", {"dentist", "yoga", "tennis", "football", "conference", "meeting", "optometrist", "lab_appointment",
                  "swimming_lesson", "doctor", "piano_recital", "team_lunch"}},
       {"date", {"monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday", "the_5th", "the_12th",
                 "the_20th"}},
       {"time", {"9am", "10am", "11am", "1pm", "2pm", "3pm", "5pm", "7pm"}},
       {"party", {"tom", "ana", "jeff", "marie", "father", "sister", "boss", "hr"}}},
      {{"when is my {event}", "your {event} is on {date} at {time}"},
       {"what time is the {event}", "the {event} is at {time}"},
       {"who is coming to my {event}", "your {event} is with {party}"},
       {"what day is my {event}", "{event} is on {date}"}},
      200, 40));

  specs.push_back(make(
      "navigation", 2, "poi", {"distance", "traffic", "address"},
      {{"poi", {"chevron", "valero", "stanford_express_care", "palo_alto_garage", "home", "dish_parking", "whole_foods",
                "safeway", "cafe_venetia", "the_westin", "mandarin_roots", "town_and_country"}},
       {"distance", {"1_miles", "2_miles", "3_miles", "4_miles", "5_miles", "6_miles", "7_miles"}},
       {"traffic", {"no_traffic", "moderate_traffic", "heavy_traffic", "road_block_nearby"}},
       {"address", {"783_arcadia_pl", "200_alester_ave", "481_amaranta_ave", "899_ames_ct", "5671_barringer_street",
                    "329_el_camino_real", "113_arbol_dr", "657_ames_ave"}}},
      {{"give me directions to {poi}", "{poi} is {distance} away at {address}"},
       {"how is the traffic to {poi}", "there is {traffic} on the way to {poi}"},
       {"what is the address of {poi}", "{poi} is located at {address}"}},
      250, 40));

  specs.push_back(make(
      "weather", 3, "location", {"weather", "low", "high"},
      {{"location", {"seattle", "boston", "carson", "durham", "oakland", "fresno", "inglewood", "corona",
                     "mountain_view", "san_jose", "redwood_city", "menlo_park"}},
       {"weather", {"rain", "snow", "sunny", "cloudy", "windy", "foggy", "humid", "hail"}},
       {"low", {"20f", "30f", "40f", "50f", "60f"}},
       {"high", {"70f", "80f", "90f", "100f", "65f"}}},
      {{"what is the weather in {location}", "it will be {weather} in {location}"},
       {"how cold will it get in {location}", "the low in {location} is {low}"},
       {"will it be hot in {location}", "the high in {location} is {high}"}},
      200, 40));

  specs.push_back(make(
      "restaurant", 4, "restaurant", {"food", "area", "pricerange"},
      {{"restaurant", {"pizza_hut", "the_nirala", "curry_garden", "golden_wok", "la_margherita", "midsummer_house",
                       "saint_johns_chop_house", "yippee_noodle_bar", "the_gardenia", "bangkok_city", "cote",
                       "royal_spice"}},
       {"food", {"italian", "indian", "chinese", "french", "thai", "british", "european", "mediterranean"}},
       {"area", {"centre", "north", "south", "east", "west"}},
       {"pricerange", {"cheap", "moderate", "expensive"}}},
      {{"i want to eat at {restaurant}", "{restaurant} serves {food} food in the {area}"},
       {"how expensive is {restaurant}", "{restaurant} is in the {pricerange} price range"},
       {"where is {restaurant}", "{restaurant} is in the {area} of town"},
       {"what food does {restaurant} serve", "they serve {food} food"}},
      400, 40));

  specs.push_back(make(
      "hotel", 5, "hotel", {"stars", "district", "price"},
      {{"hotel", {"acorn_guest_house", "alexander_bed_and_breakfast", "allenbell", "ashley_hotel", "avalon",
                  "cityroomz", "el_shaddai", "gonville_hotel", "hamilton_lodge", "huntingdon_marriott", "lovell_lodge",
                  "the_lensfield_hotel"}},
       {"stars", {"one_star", "two_star", "three_star", "four_star", "five_star"}},
       {"district", {"downtown", "uptown", "riverside", "airport", "harbour"}},
       {"price", {"low_cost", "mid_priced", "luxury"}}},
      {{"tell me about {hotel}", "{hotel} is a {stars} hotel in {district}"},
       {"what does {hotel} cost", "{hotel} is {price}"},
       {"where is the {hotel}", "the {hotel} is near {district}"}},
      300, 40));

  specs.push_back(make(
      "attraction", 6, "attraction", {"kind", "location_area", "fee"},
      {{"attraction", {"all_saints_church", "byard_art", "castle_galleries", "cherry_hinton_water_play", "clare_hall",
                       "club_salsa", "kettles_yard", "primavera", "scudamores_punting", "the_place",
                       "vue_cinema", "whipple_museum"}},
       {"kind", {"museum", "park", "college", "theatre", "cinema", "church", "nightclub", "pool"}},
       {"location_area", {"old_town", "market_square", "newnham", "chesterton", "cherry_hinton"}},
       {"fee", {"free_entry", "2_pounds", "5_pounds", "4_pounds", "3_50_pounds"}}},
      {{"what is {attraction}", "{attraction} is a {kind} in {location_area}"},
       {"how much is {attraction}", "entrance to {attraction} is {fee}"},
       {"where can i find {attraction}", "{attraction} is in {location_area}"}},
      100, 40));

  specs.push_back(make(
      "camrest", 7, "venue", {"cuisine", "part", "budget"},
      {{"venue", {"the_copper_kettle", "charlie_chan", "rice_house", "da_vinci_pizzeria", "the_missing_sock",
                  "nandos", "meze_bar", "la_raza", "cocum", "sala_thong", "hakka", "kymmoy"}},
       {"cuisine", {"korean", "vietnamese", "turkish", "spanish", "portuguese", "lebanese", "gastropub", "african"}},
       {"part", {"northern", "southern", "eastern", "western", "central"}},
       {"budget", {"low_budget", "midrange", "pricey"}}},
      {{"is {venue} any good", "{venue} serves {cuisine} food in the {part} part of town"},
       {"is {venue} expensive", "{venue} is {budget}"},
       {"which part of town is {venue}", "{venue} is in the {part} part"}},
      50, 20));

  for (auto& s : specs) {
    s.n_train = scaled(s.n_train, scale);
    s.n_val = scaled(s.n_val, scale);
    s.n_test = scaled(s.n_test, scale);
    s.seed = seed;
  }
  return specs;
}

}  // namespace tpem::stream
